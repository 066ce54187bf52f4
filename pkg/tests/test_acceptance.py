"""Acceptance gate: nine criteria, each printing one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` or directly with
``python3 tests/test_acceptance.py``.  Every check is exact; there are no
tolerances.
"""

import itertools
import sys
import time

import pytest

from homprofile.enumeration import enumerate_class
from homprofile.harness import checker_cross_validation, negative_demo, verify_theorem
from homprofile.homs import count_hom_maps
from homprofile.logic import equivalent, simulation_fixpoint
from homprofile.semiring import BOOL, analyze_periodicity, mod_p
from homprofile.structures import ClassKind, ClassTag, Signature
from homprofile.transforms import make_clique, make_figure3_pair

SIG = Signature(("p",), ("R",))
EXHAUSTIVE = {"corpus": "exhaustive", "max_states": 3, "props": 1, "actions": 1}


def _summarize(*reports):
    parts = [f"{r.theorem} {r.agreements}/{r.pairs_tested}" for r in reports]
    return all(r.ok for r in reports), ", ".join(parts)


def criterion_1():
    r = verify_theorem("Lovász", EXHAUSTIVE)
    ok, text = _summarize(r)
    return ok, f"N-profiles over all structures <= 3 states vs isomorphism: {text} pairs agree"


def criterion_2():
    t45 = verify_theorem("T4.5", {**EXHAUSTIVE, "k": (1, 2, 3)})
    l44 = verify_theorem("L4.4", {**EXHAUSTIVE, "k": (1, 2, 3)})
    ok, text = _summarize(t45, l44)
    ok = ok and l44.corpus["treeStates"] == 5
    return ok, f"unraveling isomorphism vs N-tree profiles, k=1..3, plus count identity for trees <= 5 states: {text}"


def criterion_3():
    t32 = verify_theorem("T3.2", {**EXHAUSTIVE, "k": (1, 2, 3)})
    fig = verify_theorem("T3.2", {"corpus": "figure3", "k": (1, 2, 3)})
    M, N = make_figure3_pair()
    verdicts = [v for key in fig.details for v in fig.details[key].get("verdicts", [])]
    fig_equal = fig.ok and all(v["profile"] == "equal" and v["oracle"] == "equivalent" for v in verdicts)
    not_ml = not equivalent(M, N, "ml")
    not_mlplus = not equivalent(M, N, "mlplus")
    ok = t32.ok and fig_equal and not_ml and not_mlplus
    return ok, (
        f"B-tree profiles vs bounded mutual simulation: {_summarize(t32)[1]}; figure-3 pair equivalent at k=1..3: "
        f"{fig_equal}; not ML-equivalent: {not_ml}; not ML+-equivalent: {not_mlplus}"
    )


def criterion_4():
    t54 = verify_theorem("T5.4", EXHAUSTIVE)
    l53 = verify_theorem("L5.3", {**EXHAUSTIVE, "source_states": 4})
    ok, text = _summarize(t54, l53)
    return ok, f"generated-submodel isomorphism vs N-profiles over PG, plus gsub identity for PG sources <= 4: {text}"


def criterion_5():
    r = verify_theorem("P4.9", {**EXHAUSTIVE, "source_states": 4})
    d = r.details
    ok = r.ok and d["roundTrips"] == d["downSources"] + d["flipSources"]
    return ok, (
        f"down/flip/PG-augmentation counts and round trips, sources <= 4 states, targets <= 3: {_summarize(r)[1]} "
        f"({d['downSources']} acyclic, {d['flipSources']} backward trees, {d['augmentSources']} connected sources)"
    )


def criterion_6():
    reports = [
        verify_theorem("T4.12", {**EXHAUSTIVE, "k": (1, 2, 3)}),
        verify_theorem("T-global", EXHAUSTIVE),
        verify_theorem("T-HLB", EXHAUSTIVE),
        verify_theorem("T3.5", {**EXHAUSTIVE, "k": (1, 2, 3)}),
        verify_theorem("T3.7", EXHAUSTIVE),
    ]
    ok, text = _summarize(*reports)
    return ok, f"expansion-based suites on all pairs <= 3 states: {text}"


def criterion_7():
    r = verify_theorem("Fact2.1", EXHAUSTIVE)
    trees = len(enumerate_class(ClassTag(ClassKind.TREE), SIG, 4))
    ok = r.ok and r.corpus["queries"] >= 50 and r.corpus["treeQueries"] == trees
    return ok, (
        f"{r.corpus['queries']} queries ({r.corpus['treeQueries']} tree queries) against "
        f"{r.corpus['targets']} targets: {_summarize(r)[1]} counts equal"
    )


def criterion_8():
    trees = enumerate_class(ClassTag(ClassKind.TREE), SIG, 4).structures
    counts_ok = all(count_hom_maps(T, make_clique(n)) == n ** (T.n - 1) for T in trees for n in range(1, 5))
    cliques = [make_clique(n) for n in range(1, 5)]
    bisim = all(simulation_fixpoint("bisimulation", A, B)[0] for A, B in itertools.combinations(cliques, 2))
    b = analyze_periodicity(BOOL)
    bool_ok = (b.L, b.P) == (1, 1)
    modp_ok = all((analyze_periodicity(mod_p(p)).L, analyze_periodicity(mod_p(p)).P) == (0, p) for p in (2, 3, 5, 7))
    demo = negative_demo(mod_p(3))
    ex = demo["separatingExample"]
    demo_ok = demo["ok"] and demo["case"] == "zero-in-segment" and (ex["left"], ex["right"]) == (1, 0)
    ok = counts_ok and bisim and bool_ok and modp_ok and demo_ok
    return ok, (
        f"|Hom(T,K^n)| = n^(|T|-1) for {len(trees)} trees, n<=4: {counts_ok}; cliques bisimilar: {bisim}; "
        f"bool (L,P)=(1,1): {bool_ok}; mod p (L,P)=(0,p): {modp_ok}; mod 3 K^1 vs K^3 gives 1 vs 0: {demo_ok}"
    )


def criterion_9():
    r = checker_cross_validation(samples=1000, seed=0, max_depth=3, max_states=4)
    st_bad = len(r["standardTranslationDisagreements"])
    unr_bad = len(r["unravelingDisagreements"])
    return r["ok"], (
        f"1000 seeded samples: standard translation disagreements {st_bad}, unraveling disagreements {unr_bad}"
    )


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9]


def _line(number, ok, text, seconds):
    return f"[criterion {number}] {'PASS' if ok else 'FAIL'} ({seconds:.1f}s) {text}"


@pytest.mark.slow
@pytest.mark.parametrize("number", range(1, len(CRITERIA) + 1))
def test_criterion(number, capsys):
    start = time.time()
    ok, text = CRITERIA[number - 1]()
    with capsys.disabled():
        print("\n" + _line(number, ok, text, time.time() - start))
    assert ok, text


def main() -> int:
    failures = 0
    for number, crit in enumerate(CRITERIA, start=1):
        start = time.time()
        ok, text = crit()
        print(_line(number, ok, text, time.time() - start), flush=True)
        failures += not ok
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
