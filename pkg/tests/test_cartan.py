import pytest

from transym.cartan import (CartanError, build_cartan, canonical_section,
                            dG_delta_lemma_check, delta_homology_triviality,
                            equivariant_cohomology, formality_check,
                            invariant_s_dims, section_is_dG_closed,
                            section_projects_to_identity, verify_cartan,
                            verify_iota_exactness)
from transym.foliation import (build, reeb_action, rotation_action,
                               trivial_action)
from transym.hodge import basic_cohomology, harmonic_representative


@pytest.fixture(scope="module")
def h5():
    return build("heisenberg5")


@pytest.mark.parametrize("make", [trivial_action, reeb_action])
def test_heisenberg5_formality_dims(h5, make):
    cx = build_cartan(make(h5), 3)
    rep = formality_check(cx)
    assert rep.passed, [f.name for f in rep.failures()]
    dims = [equivariant_cohomology(cx, k)[0] for k in range(5)]
    coh = basic_cohomology(h5)
    betti = [coh.dim(k) for k in range(5)]
    expected = [sum(betti[k - 2 * i] for i in range(0, k // 2 + 1)
                    if k - 2 * i >= 0) for k in range(5)]
    assert dims == expected
    assert dims[2] == 7  # betti (1,4,5,...): 5 + 1 + 1 = 7


def test_torus1_rank2_degree2(h5):
    t1 = build("torus1")
    cx = build_cartan(trivial_action(t1, rank=2), 3)
    assert equivariant_cohomology(cx, 2)[0] == 3  # H^2 + 2 copies of H^0
    assert formality_check(cx).passed


def test_window_refusal():
    t1 = build("torus1")
    cx = build_cartan(trivial_action(t1, rank=1), 2)
    with pytest.raises(CartanError):
        equivariant_cohomology(cx, cx.safe_window + 1)


def test_cartan_operator_identities(h5):
    cx = build_cartan(reeb_action(h5), 3)
    rep = verify_cartan(cx)
    assert rep.passed, [f.name for f in rep.failures()]


def test_dG_delta_lemma(h5):
    for make in (trivial_action, reeb_action):
        cx = build_cartan(make(h5), 3)
        rep = dG_delta_lemma_check(cx)
        assert rep.passed, [f.name for f in rep.failures()]


def test_delta_homology_triviality(h5):
    cx = build_cartan(trivial_action(h5), 2)
    rep = delta_homology_triviality(cx)
    assert rep.passed, [f.name for f in rep.failures()]


def test_iota_exactness(h5):
    for make in (trivial_action, reeb_action):
        cx = build_cartan(make(h5), 2)
        rep = verify_iota_exactness(cx, 0)
        assert rep.passed, [f.name for f in rep.failures()]


def test_iota_exactness_rotation_on_truncated_model():
    tl = build("trunc_linear_1_4")
    cx = build_cartan(rotation_action(tl), 2)
    rep = verify_iota_exactness(cx, 0)
    assert rep.passed, [f.name for f in rep.failures()]
    assert any("skipped" in n for n in rep.notes)


def test_truncated_rotation_cartan(h5):
    tl = build("trunc_linear_1_4")
    cx = build_cartan(rotation_action(tl), 2)
    assert not cx.del_op.is_zero()
    assert verify_cartan(cx).passed


def test_canonical_section_full_basis(h5):
    for make in (trivial_action, reeb_action):
        cx = build_cartan(make(h5), 3)
        coh = basic_cohomology(h5)
        for k in sorted(coh.space.degrees):
            if k > cx.safe_window:
                continue
            for v in coh.reps(k):
                cls = h5.basic.element_from_vector(k, v)
                harm, _ = harmonic_representative(cx.pkg, cls)
                parts, _ = canonical_section(cx, harm)
                assert section_projects_to_identity(cx, parts, harm)
                assert section_is_dG_closed(cx, parts, k)


def test_invariant_s_dims_abelian():
    # rank-2 abelian: dim S^i = i + 1
    structure = [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]
    dims = invariant_s_dims(structure, 2, 3)
    assert dims == {0: 1, 1: 2, 2: 3, 3: 4}
