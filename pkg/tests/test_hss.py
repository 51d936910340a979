"""The cut-system algorithm: half-cylinder graph, labeled-list merging,
separating pairs, backtracking, curve emission, and list splitting."""

import random

import pytest

from origami_forge.freegroup import is_conjugate_horizontal, parse_word
from origami_forge.homology import edge_cycle, f2_independent, h1_model
from origami_forge.hss import (
    NoCommonLabel,
    Sentinel,
    SLabel,
    backtrack,
    concatenate,
    emit_curve,
    find_hss,
    find_hss_detailed,
    find_separating_pair,
    format_label,
    init_lists,
    merge_all,
    replay,
    step1,
    step3_update,
)
from origami_forge.origami import (
    cylinders,
    genus,
    is_closed,
    l_origami,
    o14,
    random_origami,
    wollmilchsau,
    x_origami,
)


def shown(pool, lid):
    return [format_label(l) for l in pool.labels(lid)]


class TestStep1:
    def test_four_cylinder_cut(self):
        cuts, graph = step1(wollmilchsau())
        assert [z.base for z in cuts] == [1]
        assert graph.is_connected()

    def test_fourteen_square_cuts(self):
        cuts, _ = step1(o14())
        assert [z.base for z in cuts] == [1, 5]
        assert [z.length for z in cuts] == [4, 3]

    def test_single_cylinder_is_cut(self):
        cuts, _ = step1(x_origami(2))
        assert len(cuts) == 1

    def test_cut_count_invariant_under_bridging_order(self):
        rng = random.Random(21)
        for _ in range(25):
            o = random_origami(rng, rng.randint(2, 10))
            base = len(step1(o)[0])
            ncyl = len(cylinders(o))
            for _ in range(10):
                order = list(range(ncyl))
                rng.shuffle(order)
                assert len(step1(o, order)[0]) == base


class TestInitialLists:
    def test_four_cylinder_lists(self):
        o = wollmilchsau()
        cuts, _ = step1(o)
        pool = init_lists(o, cuts)
        lids = pool.pool_lids()
        assert [shown(pool, lid) for lid in lids] == [
            ["1", "2", "3", "4"],
            ["8", "5", "6", "7"],
            ["a5", "5", "6", "7", "8", "a5", "2", "3", "4", "1"],
        ]

    def test_fourteen_square_uncut_list(self):
        o = o14()
        cuts, _ = step1(o)
        pool = init_lists(o, cuts)
        lz = [
            lid for lid in pool.pool_lids() if pool.lists[lid].kind == "lz"
        ]
        assert shown(pool, lz[0]) == [
            "a8", "8", "9", "10", "11", "12", "13", "14",
            "a8", "7", "6", "2", "1", "4", "3", "5",
        ]

    def test_upper_list_reverses_lower_images(self):
        o = l_origami(3, 2)
        cuts, _ = step1(o)
        pool = init_lists(o, cuts)
        lower = next(
            lid for lid in pool.pool_lids() if pool.lists[lid].kind == "u"
        )
        upper = next(
            lid for lid in pool.pool_lids() if pool.lists[lid].kind == "o"
        )
        lo = [l.square for l in pool.labels(lower)]
        up = [l.square for l in pool.labels(upper)]
        assert up == [o.p2(s) for s in reversed(lo)]


class TestMerging:
    def test_no_common_label(self):
        o = wollmilchsau()
        cuts, _ = step1(o)
        pool = init_lists(o, cuts)
        a, b = pool.pool_lids()[:2]  # [1,2,3,4] and [8,5,6,7]
        with pytest.raises(NoCommonLabel):
            concatenate(pool, a, b, SLabel(9, ()), None)

    def test_four_cylinder_merge_result(self):
        o = wollmilchsau()
        cuts, _ = step1(o)
        pool = init_lists(o, cuts)
        final, history = merge_all(pool)
        assert shown(pool, final) == [
            "1", "3", "4", "1", "a5", "5", "6", "7",
            "5", "6", "7", "a5", "3", "4",
        ]
        assert replay(pool, history) == pool.lists[final].sides

    def test_fourteen_square_merge_result(self):
        o = o14()
        cuts, _ = step1(o)
        pool = init_lists(o, cuts)
        final, history = merge_all(pool)
        assert shown(pool, final) == [
            "8", "11", "14", "13", "10", "11", "10", "8", "13", "14",
        ]
        assert replay(pool, history) == pool.lists[final].sides


class TestSeparatingPair:
    def test_four_cylinder_choice(self):
        labels = [
            SLabel(s, ()) if isinstance(s, int) else s
            for s in (1, 3, 4, 1, Sentinel(5), 5, 6, 7,
                      5, 6, 7, Sentinel(5), 3, 4)
        ]
        a, b = find_separating_pair(labels)
        assert (format_label(a), format_label(b)) == ("1", "3")

    def test_smallest_witness_tiebreak(self):
        labels = [SLabel(s, ()) for s in (5, 6, 7, 5, 6, 7)]
        a, b = find_separating_pair(labels)
        assert (format_label(a), format_label(b)) == ("5", "6")

    def test_alternating_pattern(self):
        labels = [SLabel(s, ()) for s in (1, 2, 1, 2)]
        a, b = find_separating_pair(labels)
        assert (format_label(a), format_label(b)) == ("1", "2")


class TestBacktrackAndEmission:
    def run_round(self, o):
        cuts, _ = step1(o)
        pool = init_lists(o, cuts)
        final, history = merge_all(pool)
        alpha, _ = find_separating_pair(pool.labels(final))
        chain = backtrack(pool, history, alpha)
        return pool, chain

    def test_four_cylinder_chain_and_curve(self):
        pool, chain = self.run_round(wollmilchsau())
        pairs = [
            (format_label(pool.label_of(p.side_a)),
             format_label(pool.label_of(p.side_b)), p.half)
            for p in chain
        ]
        assert pairs == [("1", "2", "u"), ("2", "1", "o")]
        c = emit_curve(pool, chain)
        assert (c.start, str(c.word)) == (1, "x y^-1 x y")

    def test_fourteen_square_chain_and_curve(self):
        pool, chain = self.run_round(o14())
        pairs = [
            (format_label(pool.label_of(p.side_a)),
             format_label(pool.label_of(p.side_b)), p.half)
            for p in chain
        ]
        assert pairs == [("8", "12", "u"), ("12", "8", "o")]
        c = emit_curve(pool, chain)
        assert (c.start, str(c.word)) == (8, "x^-3 y^-1 x y")


class TestListSplitting:
    def test_four_cylinder_split_tables(self):
        o = wollmilchsau()
        cuts, _ = step1(o)
        pool = init_lists(o, cuts)
        final, history = merge_all(pool)
        alpha, _ = find_separating_pair(pool.labels(final))
        chain = backtrack(pool, history, alpha)
        step3_update(pool, chain)
        tables = [
            (pool.lists[lid].kind, pool.lists[lid].cyclic, shown(pool, lid))
            for lid in pool.pool_lids()
        ]
        assert tables == [
            ("u", True, ["1'", '2"', "3", "4"]),
            ("u", False, ['1"', "2'"]),
            ("o", True, ["8", "5", "6", "7"]),
            ("o", False, ["1'", '2"']),
            ("lz", True,
             ["a5", "5", "6", "7", "8", "a5", "2'", "3", "4", '1"']),
        ]

    def test_fourteen_square_split_table(self):
        o = o14()
        cuts, _ = step1(o)
        pool = init_lists(o, cuts)
        final, history = merge_all(pool)
        alpha, _ = find_separating_pair(pool.labels(final))
        chain = backtrack(pool, history, alpha)
        step3_update(pool, chain)
        split = [
            shown(pool, lid)
            for lid in pool.pool_lids()
            if pool.lists[lid].kind == "u" and not pool.lists[lid].cyclic
        ]
        assert split == [['12"', "13", "14", "8'"]]
        lz = [
            shown(pool, lid)
            for lid in pool.pool_lids()
            if pool.lists[lid].kind == "lz"
        ]
        assert lz == [[
            "a8", '8"', "9", "10", "11", "12'",
            "a8", "7", "6", "2", "1", "4", "3", "5",
        ]]


class TestDriver:
    def test_four_cylinder_system(self):
        curves = find_hss(wollmilchsau())
        assert [(c.start, str(c.word)) for c in curves] == [
            (1, "x^4"),
            (1, "x y^-1 x y"),
            (5, "x^-1 y^-1 x^-1 y"),
        ]

    def test_fourteen_square_system(self):
        curves = find_hss(o14())
        assert [(c.start, str(c.word)) for c in curves] == [
            (1, "x^4"),
            (5, "x^3"),
            (8, "x^-3 y^-1 x y"),
            (8, "x^2 y^-1 x^-1 y"),
        ]

    @pytest.mark.parametrize("m, n", [(2, 2), (2, 3), (4, 3)])
    def test_l_shape_cuts_are_cylinder_words(self, m, n):
        curves = find_hss(l_origami(m, n))
        words = sorted(str(c.word) for c in curves)
        assert words == sorted(["x" if m == 1 else f"x^{m}", "x"])

    def test_detailed_result_reports_cuts_and_histories(self):
        result = find_hss_detailed(o14())
        assert len(result.cut_cylinders) == 2
        assert len(result.histories) == 2  # two backtracking rounds
        for history in result.histories:
            assert history.final is not None

    def test_random_sweep_invariants(self):
        rng = random.Random(99)
        for _ in range(60):
            o = random_origami(rng, rng.randint(2, 12))
            g = genus(o)
            curves = find_hss(o)
            assert len(curves) == g
            model = h1_model(o)
            classes = []
            for c in curves:
                assert is_closed(o, c)
                assert is_conjugate_horizontal(c.word)
                classes.append(model.coords(edge_cycle(o, c.start, c.word)))
            assert f2_independent(classes)
