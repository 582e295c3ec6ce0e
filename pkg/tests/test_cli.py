"""Dataset round trips, fixture integrity, and the command line."""

from fractions import Fraction

import pytest

from k3lat import cli
from k3lat.cli import Dataset, DatasetError, InputError, builtin_dataset, \
    emit_dataset, format_table, load_dataset, main, parse_dataset, \
    parse_table, run_table
from k3lat.fixtures import DATASET_TEXT
from k3lat.fqm import Fqm, isomorphisms
from k3lat.glue import partner_disc_candidates
from k3lat.lattice import leech_lattice

PINNED_ORDERS = {
    "L2(11)": 660, "L3(4)": 20160, "A7": 2520, "2^3:L2(7)": 1344,
    "2xL2(7)": 336, "2:A6": 720, "2^4:S5": 1920, "S6": 720, "M10": 720,
    "(3xA5):2": 360, "Q(3^2:2)": 1458, "2^4:(S3xS3)": 576,
    "3^2:QD16": 144, "3^(1+4):2.2^2": 1944, "3^4:A6": 29160,
}

# the six rows whose partner form is not pinned by the glue analysis alone
UNPINNED = {"2^3:L2(7)", "2xL2(7)", "2:A6", "2^4:S5", "Q(3^2:2)",
            "2^4:(S3xS3)"}


def small_dataset() -> Dataset:
    ds = builtin_dataset()
    return Dataset((ds.group("3^4:A6"), ds.group("L2(11)")), ())


def row_tuples(rows):
    return [(r.group_name, r.h_sq, r.h_div, r.m, r.t_gram, r.k3_flag, r.mode)
            for r in rows]


class TestParseEmit:
    def test_builtin_round_trip_is_byte_identical(self):
        assert emit_dataset(parse_dataset(DATASET_TEXT)) == DATASET_TEXT

    def test_comments_and_blank_lines_are_ignored(self):
        noisy = ("format 1\n# a comment\n\ngroup X\norder 6\n\ngram 3\n"
                 "2 0 0\n0 2 0  # trailing note\n0 0 2\nend\n")
        clean = ("format 1\n\ngroup X\norder 6\ngram 3\n"
                 "2 0 0\n0 2 0\n0 0 2\nend\n")
        assert emit_dataset(parse_dataset(noisy)) == clean

    def test_empty_text_wants_header(self):
        with pytest.raises(DatasetError, match=r"line 1: empty dataset"):
            parse_dataset("")

    def test_header_is_required(self):
        with pytest.raises(DatasetError, match=r"'format 1' header"):
            parse_dataset("group X\nend\n")

    def test_unknown_block_is_named(self):
        with pytest.raises(DatasetError, match=r"unknown block 'widget'"):
            parse_dataset("format 1\nwidget W\nend\n")

    def test_missing_end_points_at_the_block(self):
        with pytest.raises(DatasetError, match=r"line 2: .*missing its 'end'"):
            parse_dataset("format 1\ngroup X\norder 6\n")

    def test_non_integer_entry_is_located(self):
        text = "format 1\ngroup X\norder 6\ngram 3\n2 0 0\n0 x 0\n0 0 2\nend\n"
        with pytest.raises(DatasetError, match=r"line 6: .*not an integer"):
            parse_dataset(text)

    def test_asymmetric_gram_symmetry_diagnostic(self):
        text = "format 1\ngroup X\norder 2\ngram 3\n2 1 0\n0 2 0\n0 0 2\nend\n"
        with pytest.raises(DatasetError, match=r"line 4: gram symmetry"):
            parse_dataset(text)

    def test_odd_diagonal_is_rejected(self):
        text = "format 1\ngroup X\norder 2\ngram 3\n3 1 0\n1 2 0\n0 0 2\nend\n"
        with pytest.raises(DatasetError, match="evenness"):
            parse_dataset(text)

    def test_indefinite_gram_is_rejected(self):
        text = ("format 1\ngroup X\norder 2\ngram 3\n"
                "2 0 0\n0 -2 0\n0 0 2\nend\n")
        with pytest.raises(DatasetError, match="positive definite"):
            parse_dataset(text)

    def test_group_grams_are_three_by_three(self):
        text = "format 1\ngroup X\norder 2\ngram 2\n2 0\n0 2\nend\n"
        with pytest.raises(DatasetError, match="3x3"):
            parse_dataset(text)

    def test_ragged_gram_row(self):
        text = "format 1\ngroup X\norder 2\ngram 3\n2 0\n0 2 0\n0 0 2\nend\n"
        with pytest.raises(DatasetError, match=r"line 5: .*expected 3"):
            parse_dataset(text)

    def test_q_wants_one_value_per_generator(self):
        text = ("format 1\ngroup X\norder 2\ngram 3\n2 0 0\n0 2 0\n0 0 2\n"
                "disc 11 11\nq 16/11\nend\n")
        with pytest.raises(DatasetError, match="one value per disc generator"):
            parse_dataset(text)

    def test_b_indices_must_be_ordered(self):
        text = ("format 1\ngroup X\norder 2\ngram 3\n2 0 0\n0 2 0\n0 0 2\n"
                "disc 11 11\nq 16/11 20/11\nb 1 1 1/2\nend\n")
        with pytest.raises(DatasetError, match=r"0 <= i < j"):
            parse_dataset(text)

    def test_disc_orders_form_a_chain(self):
        text = ("format 1\ngroup X\norder 2\ngram 3\n2 0 0\n0 2 0\n0 0 2\n"
                "disc 4 6\nq 1/4 1/6\nend\n")
        with pytest.raises(DatasetError, match="disc form"):
            parse_dataset(text)

    def test_q_without_disc_line(self):
        text = ("format 1\ngroup X\norder 2\ngram 3\n2 0 0\n0 2 0\n0 0 2\n"
                "q 1/2\nend\n")
        with pytest.raises(DatasetError, match="without a disc line"):
            parse_dataset(text)

    def test_duplicate_group_names_collide(self):
        block = "group X\norder 2\ngram 3\n2 0 0\n0 2 0\n0 0 2\nend\n"
        with pytest.raises(DatasetError, match="duplicate group name"):
            parse_dataset("format 1\n" + block + block)

    def test_obar_round_trip_and_form_check(self):
        text = ("format 1\n\ngroup X\norder 660\ngram 3\n"
                "2 1 0\n1 6 0\n0 0 22\n"
                "disc 11 11\nq 16/11 20/11\n"
                "obar 1,0 0,1\nobar 10,0 0,10\nend\n")
        ds = parse_dataset(text)
        assert emit_dataset(ds) == text
        assert len(ds.group("X").obar) == 2
        swapped = text.replace("obar 1,0 0,1", "obar 0,1 1,0")
        with pytest.raises(DatasetError, match="preserve the form"):
            parse_dataset(swapped)

    def test_coinv_gram_checked_against_disc(self):
        text = ("format 1\n\ngroup Y\norder 2\ngram 3\n2 0 0\n0 2 0\n0 0 2\n"
                "disc 2\nq 3/2\ncoinv_gram 1\n-2\nend\n")
        ds = parse_dataset(text)
        assert emit_dataset(ds) == text
        assert ds.group("Y").coinv.gram == ((-2,),)
        with pytest.raises(DatasetError, match="disc/gram consistency"):
            parse_dataset(text.replace("q 3/2", "q 1/2"))

    def test_coinv_gram_must_be_negative_definite(self):
        text = ("format 1\ngroup Y\norder 2\ngram 3\n2 0 0\n0 2 0\n0 0 2\n"
                "coinv_gram 1\n2\nend\n")
        with pytest.raises(DatasetError, match="negative definite"):
            parse_dataset(text)

    def test_coinv_isometry_is_validated(self):
        base = ("format 1\n\ngroup Y\norder 2\ngram 3\n2 0 0\n0 2 0\n0 0 2\n"
                "disc 2\nq 3/2\ncoinv_gram 1\n-2\n"
                "coinv_isometry 1\n-1\ng_gen 1\n1\nend\n")
        ds = parse_dataset(base)
        assert emit_dataset(ds) == base
        assert ds.group("Y").coinv_isometries == (((-1,),),)
        with pytest.raises(DatasetError, match="does not preserve"):
            parse_dataset(base.replace("coinv_isometry 1\n-1",
                                       "coinv_isometry 1\n2"))

    def test_g_gen_requires_coinv_gram(self):
        text = ("format 1\ngroup Y\norder 2\ngram 3\n2 0 0\n0 2 0\n0 0 2\n"
                "g_gen 1\n1\nend\n")
        with pytest.raises(DatasetError, match="require a coinv_gram"):
            parse_dataset(text)

    def test_load_dataset_from_file(self, tmp_path):
        path = tmp_path / "data.txt"
        path.write_text(DATASET_TEXT)
        assert emit_dataset(load_dataset(str(path))) == DATASET_TEXT

    def test_empty_dataset_emits_header_only(self):
        assert emit_dataset(Dataset((), ())) == "format 1\n"
        assert parse_dataset("format 1\n") == Dataset((), ())


class TestFixtures:
    def test_fifteen_groups_with_the_expected_orders(self):
        ds = builtin_dataset()
        assert {g.name: g.order for g in ds.groups} == PINNED_ORDERS

    def test_gram_counts_and_invariants(self):
        ds = builtin_dataset()
        assert sum(len(g.grams) for g in ds.groups) == 25
        for g in ds.groups:
            for lat in g.grams:
                assert lat.rank == 3
                assert lat.is_even
                assert lat.is_positive_definite

    def test_documented_grams_are_verbatim(self):
        ds = builtin_dataset()
        eleven = ds.group("L2(11)")
        assert eleven.grams[0].gram == ((2, 1, 0), (1, 6, 0), (0, 0, 22))
        assert eleven.grams[1].gram == ((6, 2, 2), (2, 8, -3), (2, -3, 8))
        # subscript underscores in lookups are optional
        a6 = ds.group("3^4:A_6")
        assert a6.name == "3^4:A6"
        assert a6.grams == (ds.group("3^4:A6").grams[0],)
        assert a6.grams[0].gram == ((6, 3, 0), (3, 6, 0), (0, 0, 6))

    def test_leech_block_matches_the_constructor(self):
        assert builtin_dataset().lattice("Leech").gram == \
            leech_lattice().gram

    def test_unknown_names_raise(self):
        with pytest.raises(KeyError):
            builtin_dataset().group("M23")
        with pytest.raises(KeyError):
            builtin_dataset().lattice("E8")

    def test_pinned_partner_forms(self):
        ds = builtin_dataset()
        assert ds.group("L2(11)").disc == Fqm(
            (11, 11), (Fraction(16, 11), Fraction(20, 11)),
            ((Fraction(0),), ()))
        assert ds.group("3^4:A6").disc == Fqm(
            (3, 3, 9),
            (Fraction(4, 3), Fraction(4, 3), Fraction(16, 9)),
            ((Fraction(0), Fraction(1, 3)), (Fraction(2, 3),), ()))

    def test_partner_forms_rederive_from_the_grams(self):
        # dual route: the stored disc is the unique admissible index-2
        # anti-embedding partner computed from the first gram; the six
        # unpinned groups admit exactly two candidate classes
        ds = builtin_dataset()
        for g in ds.groups:
            candidates = partner_disc_candidates(g.grams[0])
            if g.name in UNPINNED:
                assert g.disc is None
                assert len(candidates) == 2
            else:
                assert candidates == [g.disc]

    def test_partner_forms_work_for_every_gram_of_the_row(self):
        ds = builtin_dataset()
        for g in ds.groups:
            if g.disc is None:
                continue
            for lat in g.grams[1:]:
                candidates = partner_disc_candidates(lat)
                assert len(candidates) == 1
                assert isomorphisms(candidates[0], g.disc)


class TestTableRuns:
    def test_pinned_rows_appear(self):
        rows, warnings = run_table(small_dataset())
        assert warnings == []
        tups = row_tuples(rows)
        assert ("3^4:A6", 6, 2, 6, ((6, 3), (3, 6)), "unknown",
                "permissive") in tups
        assert ("L2(11)", 22, 2, 2, ((2, 1), (1, 6)), "unknown",
                "permissive") in tups
        assert all(r.mode == "permissive" for r in rows)

    def test_exact_mode_downgrades_with_warnings(self):
        permissive, _ = run_table(small_dataset())
        rows, warnings = run_table(small_dataset(), mode="exact")
        assert rows == permissive
        assert len(warnings) == 2
        assert all("exact mode needs obar" in w for w in warnings)

    def test_groups_without_disc_are_skipped(self):
        ds = Dataset((builtin_dataset().group("2:A6"),), ())
        rows, warnings = run_table(ds)
        assert rows == []
        assert warnings == ["2:A6: no coinvariant discriminant data, skipped"]

    def test_empty_dataset_yields_empty_table(self):
        rows, warnings = run_table(Dataset((), ()))
        assert (rows, warnings) == ([], [])
        assert format_table([], "csv") == "group,h_sq,div,m,t_gram,k3,mode\n"

    def test_unknown_mode_is_an_input_error(self):
        with pytest.raises(InputError, match="unknown mode"):
            run_table(Dataset((), ()), mode="fast")

    def test_formats_round_trip(self):
        rows, _ = run_table(small_dataset())
        for fmt in ("csv", "markdown"):
            text = format_table(rows, fmt)
            assert parse_table(text, fmt) == row_tuples(rows)

    def test_parallel_run_matches_serial(self):
        serial = run_table(small_dataset())
        assert run_table(small_dataset(), jobs=2) == serial


class TestMain:
    def test_disc_inline(self, capsys):
        assert main(["disc", "--gram", "2 1 0; 1 6 0; 0 0 22"]) == 0
        out = capsys.readouterr().out
        assert "orders: 11 22" in out

    def test_disc_of_unimodular_gram(self, capsys):
        assert main(["disc", "--lattice", "Leech"]) == 0
        assert "orders: trivial" in capsys.readouterr().out

    def test_exactly_one_gram_source(self, capsys):
        assert main(["disc"]) == 1
        assert "exactly one" in capsys.readouterr().err

    def test_bad_inline_gram(self, capsys):
        assert main(["disc", "--gram", "2 1; 1"]) == 1
        assert "square" in capsys.readouterr().err

    def test_autgroup(self, capsys):
        assert main(["autgroup", "--gram", "2 0; 0 2"]) == 0
        out = capsys.readouterr().out
        assert "order: 8" in out

    def test_autgroup_needs_definite(self, capsys):
        assert main(["autgroup", "--gram", "0 1; 1 0"]) == 1
        assert "definite" in capsys.readouterr().err

    def test_shortvec(self, capsys):
        assert main(["shortvec", "--gram", "2", "--norm", "2"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "count: 2"
        assert set(out[1:]) == {"1", "-1"}

    def test_shortvec_count_only(self, capsys):
        assert main(["shortvec", "--gram", "2 0; 0 2", "--norm", "2",
                     "--count-only"]) == 0
        assert capsys.readouterr().out == "count: 4\n"

    def test_good_isos_on_a_fixture(self, capsys):
        assert main(["good-isos", "--group", "3^4:A_6"]) == 0
        out = capsys.readouterr().out
        assert "order 6 trace 2" in out

    def test_good_isos_wants_rank_three(self, capsys):
        assert main(["good-isos", "--gram", "2 0; 0 2"]) == 1

    def test_glue_check_group_route(self, capsys):
        assert main(["glue-check", "--group", "L2(11)"]) == 0
        out = capsys.readouterr().out
        assert "verdict: admissible" in out

    def test_glue_check_inline_matches_group_route(self, capsys):
        assert main(["glue-check", "--group", "L2(11)"]) == 0
        via_group = capsys.readouterr().out
        assert main(["glue-check", "--gram", "2 1 0; 1 6 0; 0 0 22",
                     "--disc", "11,11", "--q", "16/11,20/11"]) == 0
        assert capsys.readouterr().out == via_group

    def test_glue_check_without_data(self, capsys):
        assert main(["glue-check", "--group", "2:A6"]) == 1
        assert "without coinvariant" in capsys.readouterr().err

    def test_classify_subcommand(self, capsys):
        assert main(["classify", "--group", "L2(11)"]) == 0
        rows = parse_table(capsys.readouterr().out, "csv")
        assert ("L2(11)", 22, 2, 2, ((2, 1), (1, 6)), "unknown",
                "permissive") in rows

    def test_classify_exact_notes_the_downgrade(self, capsys):
        assert main(["classify", "--group", "3^4:A_6",
                     "--mode", "exact"]) == 0
        captured = capsys.readouterr()
        assert "exact mode" in captured.err
        rows = parse_table(captured.out, "csv")
        assert all(r[-1] == "permissive" for r in rows)

    def test_classify_without_disc_fails(self, capsys):
        assert main(["classify", "--group", "2xL2(7)"]) == 1
        assert "disc" in capsys.readouterr().err

    def test_hilb2_degree_four(self, capsys):
        assert main(["hilb2", "--h2", "4"]) == 0
        out = capsys.readouterr().out
        assert "[[-2,1],[1,4]]" in out
        assert "[[2,3],[3,4]]" in out
        assert "t=1/2 k=1 l=1" in out
        assert "wall block: [[-2,1],[1,4]]" in out
        assert "line class needed: yes" in out
        assert "ample model certain: no" in out

    def test_hilb2_no_lines_clears_degree_four(self, capsys):
        assert main(["hilb2", "--h2", "4", "--no-lines"]) == 0
        assert "ample model certain: yes" in capsys.readouterr().out

    def test_hilb2_degree_two_needs_a_bound(self, capsys):
        assert main(["hilb2", "--h2", "2"]) == 1
        assert "l_bound" in capsys.readouterr().err
        assert main(["hilb2", "--h2", "2", "--l-bound", "10"]) == 0

    def test_table_from_file(self, capsys, tmp_path):
        path = tmp_path / "small.txt"
        path.write_text(emit_dataset(small_dataset()))
        assert main(["table", "--dataset", str(path),
                     "--format", "markdown"]) == 0
        captured = capsys.readouterr()
        rows = parse_table(captured.out, "markdown")
        assert len(rows) == 10
        assert captured.err.strip() == "rows: 10  warnings: 0"

    def test_table_exact_mode_warns(self, capsys, tmp_path):
        path = tmp_path / "small.txt"
        path.write_text(emit_dataset(small_dataset()))
        assert main(["table", "--dataset", str(path), "--mode",
                     "exact"]) == 0
        err = capsys.readouterr().err
        assert "ran permissive" in err
        assert "warnings: 2" in err

    def test_table_on_empty_dataset(self, capsys, tmp_path):
        path = tmp_path / "empty.txt"
        path.write_text("format 1\n")
        assert main(["table", "--dataset", str(path)]) == 0
        captured = capsys.readouterr()
        assert captured.out == "group,h_sq,div,m,t_gram,k3,mode\n"
        assert "rows: 0" in captured.err

    def test_table_missing_file(self, capsys):
        assert main(["table", "--dataset", "/no/such/file"]) == 1

    def test_table_bad_jobs(self, capsys):
        assert main(["table", "--jobs", "0"]) == 1

    def test_dataset_diagnostics_reach_stderr(self, capsys, tmp_path):
        path = tmp_path / "bad.txt"
        path.write_text("format 1\ngroup X\norder 2\ngram 3\n"
                        "2 1 0\n0 2 0\n0 0 2\nend\n")
        assert main(["table", "--dataset", str(path)]) == 1
        assert "symmetry" in capsys.readouterr().err

    def test_unknown_subcommand(self, capsys):
        assert main(["bogus"]) == 1
        assert "k3lat:" in capsys.readouterr().err

    def test_bad_choice_value(self, capsys):
        assert main(["table", "--mode", "fast"]) == 1

    def test_internal_failures_exit_two(self, capsys, monkeypatch):
        def boom(*args, **kwargs):
            raise RuntimeError("boom")
        monkeypatch.setattr(cli, "obstruction_report", boom)
        assert main(["hilb2", "--h2", "4"]) == 2
        assert "internal invariant violation" in capsys.readouterr().err
