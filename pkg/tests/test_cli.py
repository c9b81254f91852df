import io
import json

import pytest

from cproof.checker import certificate_from_json, verify_certificate
from cproof.cli import build_parser, fuzz_run, main, render_dot
from cproof.proof_format import parse_document, serialize_document


@pytest.fixture(scope="module")
def workdir(tmp_path_factory):
    from cproof.corpus import builtin_corpus
    root = tmp_path_factory.mktemp("docs")
    paths = {}
    for doc in builtin_corpus():
        p = root / f"{doc.name}.cproof"
        p.write_text(serialize_document(doc), encoding="utf-8")
        paths[doc.name] = str(p)
    bad = root / "garbage.cproof"
    bad.write_text("garbage {", encoding="utf-8")
    paths["garbage"] = str(bad)
    return paths


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    args = build_parser().parse_args(argv)
    code = args.func(args, out=out, err=err)
    return code, out.getvalue(), err.getvalue()


class TestCheck:
    def test_two_hydra_poly_exit_zero(self, workdir):
        code, out, _ = run(["check", workdir["2-hydra"], "--method", "poly"])
        assert code == 0
        assert "poly: Valid" in out
        assert "3/3 rb-paths valid" in out

    def test_stuttering_both_exit_one(self, workdir):
        code, out, _ = run(["check", workdir["stuttering"], "--method", "both"])
        assert code == 1
        assert "poly: Unknown" in out
        assert "buchi: Invalid" in out
        assert "counterexample lasso" in out

    def test_garbage_exit_two(self, workdir):
        code, _, err = run(["check", workdir["garbage"]])
        assert code == 2
        assert "error" in err

    def test_missing_file_exit_two(self):
        code, _, err = run(["check", "/nonexistent/q.cproof"])
        assert code == 2

    def test_oracle_bound_exit_three(self, workdir, monkeypatch):
        monkeypatch.setenv("CPROOF_ORACLE_BOUND", "3")
        code, out, _ = run(["check", workdir["stuttering"], "--method", "buchi"])
        assert code == 3
        assert "BoundExceeded" in out

    def test_json_report_round_trips_certificate(self, workdir):
        code, out, _ = run(["check", workdir["2-hydra"], "--json"])
        assert code == 0
        report = json.loads(out)
        assert report["stats"] == {"nodes": 28, "backlinks": 3, "depth": 7}
        cert = certificate_from_json(report["poly"]["certificate"])
        doc = parse_document(open(workdir["2-hydra"], encoding="utf-8").read())
        assert verify_certificate(doc, cert)

    def test_stats_computed_not_trusted(self, workdir):
        # metadata carries externally reported stats (depth 4); the report
        # recomputes from the document instead of trusting them
        code, out, _ = run(["check", workdir["2-hydra"], "--json"])
        assert json.loads(out)["stats"]["depth"] == 7


class TestExplain:
    def test_two_hydra_blocks(self, workdir):
        code, out, _ = run(["explain", workdir["2-hydra"]])
        assert code == 0
        lines = out.splitlines()
        heads = [ln for ln in lines if ln and ln[0].isdigit()]
        assert heads == ["0 to 27", "0 to 21", "0 to 13"]
        assert sum(1 for ln in lines if ln.strip() == "===> true") == 3
        assert "[true ]" in out
        assert "root 0: {1, 2}" in out

    def test_acyclic_notice(self, workdir):
        code, out, _ = run(["explain", workdir["acyclic"]])
        assert code == 0
        assert "no cyclic SCCs" in out

    def test_stuttering_false_block(self, workdir):
        code, out, _ = run(["explain", workdir["stuttering"]])
        assert code == 1
        assert "===> false" in out
        assert "1 -> 1 [false]" in out


class TestDot:
    def test_two_hydra_dot(self, workdir, tmp_path):
        target = tmp_path / "h.dot"
        code, _, _ = run(["dot", workdir["2-hydra"], str(target)])
        assert code == 0
        text = target.read_text(encoding="utf-8")
        assert text.count("style=dashed") == 3
        node_lines = [ln for ln in text.splitlines() if "label=" in ln]
        assert len(node_lines) == 28
        assert "style=bold" in text

    def test_acyclic_no_dashed_edges(self, workdir):
        doc = parse_document(open(workdir["acyclic"], encoding="utf-8").read())
        assert "style=dashed" not in render_dot(doc)

    def test_deterministic(self, workdir, corpus_docs):
        for doc in corpus_docs:
            assert render_dot(doc) == render_dot(doc)

    def test_unwritable_target_exit_two(self, workdir):
        code, _, err = run(["dot", workdir["acyclic"], "/nonexistent/dir/x.dot"])
        assert code == 2


class TestBench:
    def test_csv_shape(self, workdir):
        code, out, _ = run(["bench", "--sizes", "10,15", "--oracle-timeout", "5"])
        assert code == 0
        lines = out.strip().splitlines()
        assert lines[0] == "size,poly_ms,oracle_ms"
        assert len(lines) == 3
        for line in lines[1:]:
            size, poly_ms, oracle = line.split(",")
            float(poly_ms)
            assert oracle.replace(".", "").isdigit() or oracle in ("timeout", "bound_exceeded")

    def test_unknown_family(self):
        code, _, err = run(["bench", "--family", "nope", "--sizes", "10"])
        assert code == 2


class TestFuzz:
    def test_zero_count_exits_immediately(self):
        code, out, _ = run(["fuzz", "--count", "0", "--seed", "1"])
        assert code == 0
        assert "0 violations in 0 documents" in out

    def test_small_run_clean(self):
        code, out, _ = run(["fuzz", "--count", "40", "--max-nodes", "8", "--seed", "42"])
        assert code == 0
        assert "0 violations" in out

    def test_broken_ordering_is_caught(self):
        # flip every trace link to progressing: stuttering loops then pass
        # the polynomial check, and the cross-check must object
        from cproof.checker import CheckConfig, PolyAnalysis, verdict_from_analysis
        from cproof.checker import analyze

        def broken_checker(doc):
            analysis = analyze(doc, CheckConfig())
            flipped = {k: {(r, b, True) for r, b, _ in v}
                       for k, v in analysis.summaries.items()}
            from cproof.measures import infer_measures
            from cproof.ordering import trace_multiset_less
            ma = infer_measures(analysis.digraph, analysis.paths, flipped)
            comparisons = [
                trace_multiset_less(p, flipped[(p.root, p.bud)],
                                    ma.per_root[p.root], ma.per_root[p.companion])
                for p in analysis.paths]
            forged = PolyAnalysis(analysis.digraph, analysis.partition,
                                  analysis.paths, flipped, ma, comparisons, False)
            return verdict_from_analysis(doc, forged)

        violations = fuzz_run(300, 8, seed=7, poly_checker=broken_checker)
        assert violations

    def test_generator_deterministic_per_seed(self):
        import random as rnd
        from cproof.families import random_document
        a = [random_document(rnd.Random(99), 8, name=f"d-{i}") for i in range(25)]
        b = [random_document(rnd.Random(99), 8, name=f"d-{i}") for i in range(25)]
        assert a == b

    def test_cli_reports_violation(self, capsys, monkeypatch):
        import cproof.cli as cli

        def always_valid(doc):
            from cproof.checker import Verdict
            return Verdict("Valid")

        monkeypatch.setattr(cli, "check_poly", lambda d, cfg=None: always_valid(d))
        code = main(["fuzz", "--count", "60", "--seed", "11"])
        captured = capsys.readouterr()
        assert code == 1
        assert "containment violated" in captured.err
