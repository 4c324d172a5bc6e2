import pytest

import elh

CHAIN_TBOX = "CI: B [= some s. B\nCI: some r. some s. B [= A\n"
CHAIN_ABOX = "A: r(a,b)\nA: B(b)\nA: A(c)\nA: s(c,c)\n"


def test_entailment():
    t = elh.TBox(CHAIN_TBOX)
    a = elh.ABox(CHAIN_ABOX)
    assert elh.entails(t, a, elh.Query("AQ A(a)"))
    assert not elh.entails(elh.TBox(), a, elh.Query("AQ A(a)"))
    assert elh.entails_ci(elh.TBox("CI: A [= some r. B\nCI: B [= C"), elh.Concept("A"), elh.Concept("some r. C"))


def test_errors():
    with pytest.raises(elh.ParseError):
        elh.TBox("CI: A [= some r.")
    with pytest.raises(elh.UnsupportedQueryError):
        elh.entails(elh.TBox(), elh.ABox("A: A(a)"), elh.Query("CQ ; exists x y ; r(x,y)"))
    with pytest.raises(elh.BudgetExceeded):
        elh.learn(elh.TBox(CHAIN_TBOX), elh.ABox(CHAIN_ABOX), "iq", budget=3)


@pytest.mark.parametrize("lang", ["aq", "iq", "cqr"])
@pytest.mark.parametrize("policy", ["minimal", "randomized", "adversarial"])
def test_learn_is_inseparable(lang, policy):
    t = elh.TBox(CHAIN_TBOX)
    a = elh.ABox(CHAIN_ABOX)
    h, stats = elh.learn(t, a, lang, policy=policy, seed=1)
    ok, counterexample = elh.inseparable(t, h, a, lang)
    assert ok and counterexample is None
    assert stats["hypothesisSize"] == h.size()


def test_update_check():
    t = elh.TBox("CI: some r. A1 [= B")
    h = elh.TBox("CI: some r. (A1 and A2) [= B")
    a0 = elh.ABox("A: r(a,b)\nA: A1(b)\nA: A2(b)")
    a = elh.ABox("A: r(a,b)\nA: A1(b)\nA: A2(b)\nA: r(a2,b2)\nA: A1(b2)")
    assert elh.check_bisim_preservation(t, h, a0, a0) == "PRESERVED"
    assert elh.check_bisim_preservation(t, h, a0, a) == "NOT_PRESERVED"
    assert elh.inseparable(t, h, a, "iq") == (False, "IQ B(a2)")


def test_batch_round_trip():
    t = elh.TBox(CHAIN_TBOX)
    a = elh.ABox(CHAIN_ABOX)
    batch = elh.build_batch(t, a, "iq")
    h = elh.learn_from_batch(batch, a, "iq")
    assert elh.inseparable(t, h, a, "iq")[0]


def test_pac_and_vc():
    assert elh.sample_count(0.1, 0.1, 1) == 30
    r = elh.pac_run(elh.TBox("CI: A [= some r. B\nCI: some r. B [= C"), elh.ABox("A: A(a)\nA: r(b,c)\nA: B(c)\nA: C(d)"))
    assert r["schedule"][0] == 30
    assert 0.0 <= r["trueError"] <= 1.0
    assert elh.cyclic_shattered(2)
    assert not elh.cyclic_shattered(2, extra_loop=True)
