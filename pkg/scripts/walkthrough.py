"""Worked examples: two jump functions on the reals and a non-open finite map."""

from envlab.corpus import openness_counterexample
from envlab.envelope import compose_O2, is_uniformly_universal, principal_O2_envelope
from envlab.realpw import cluster_envelope, example_f, example_g, kleisli_compose, universality_defects


def reals() -> None:
    f, g = example_f(), example_g()
    F, G = cluster_envelope(f), cluster_envelope(g)
    print(f"cluster envelope of f (same as for g: {F == G})")
    print(F.render())
    print("defects of f:", [d.to_json() for d in universality_defects(f)])
    print("defects of g:", [d.to_json() for d in universality_defects(g)])
    print("G.F:")
    print(kleisli_compose(G, F).render())


def finite() -> None:
    f, g, W = openness_counterexample()
    F, G = principal_O2_envelope(f), principal_O2_envelope(g)
    GF = compose_O2(G, F)
    v = is_uniformly_universal(GF.f, GF)
    print("f: discrete{0,1} -> Sigma is open:", f.is_open_map())
    print("composite of principal envelopes is universal:", v.verdict, "witness:", v.counterexample)


if __name__ == "__main__":
    reals()
    print()
    finite()
