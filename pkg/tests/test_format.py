import json

import pytest

from cproof.core import var, zero
from cproof.corpus import builtin_corpus
from cproof.proof_format import (
    ParseError,
    SemanticError,
    document_to_json,
    parse_document,
    serialize_document,
    term_from_json,
    term_to_json,
)
from conftest import make_random_docs


class TestTermJson:
    def test_digit_string_is_nullary_constructor(self):
        assert term_from_json("0") == zero()

    def test_plain_string_is_variable(self):
        assert term_from_json("x") == var("x")

    def test_nested_arrays(self):
        t = term_from_json(["s", ["0"]])
        assert str(t) == "s(0)"

    def test_round_trip(self):
        for j in ("x", "0", ["s", ["0"]], ["s", [["s", ["y"]]]], ["nil", []]):
            t = term_from_json(j)
            assert term_from_json(term_to_json(t)) == t

    def test_bad_term_shape(self):
        with pytest.raises(ParseError):
            term_from_json(["s"])
        with pytest.raises(ParseError):
            term_from_json(7)


class TestRoundTrip:
    def test_corpus_round_trips(self, corpus_docs):
        for doc in corpus_docs:
            text = serialize_document(doc)
            again = parse_document(text)
            assert again == doc
            assert serialize_document(again) == text

    def test_random_documents_round_trip(self):
        for doc in make_random_docs(60, seed=1234):
            text = serialize_document(doc)
            assert parse_document(text) == doc

    def test_serialization_is_canonical(self, hydra_doc):
        # reordering the node list must not change the output
        j = document_to_json(hydra_doc)
        j["nodes"] = list(reversed(j["nodes"]))
        scrambled = json.dumps(j, indent=2, sort_keys=True) + "\n"
        assert serialize_document(parse_document(scrambled)) == serialize_document(hydra_doc)


class TestParseErrors:
    def test_not_json(self):
        with pytest.raises(ParseError) as exc:
            parse_document("not json {")
        assert exc.value.line == 1

    def test_dangling_root(self, acyclic_doc):
        j = document_to_json(acyclic_doc)
        j["nodes"] = []
        j["buds"] = {}
        with pytest.raises(ParseError):
            parse_document(json.dumps(j))

    def test_unknown_rule_name(self, acyclic_doc):
        j = document_to_json(acyclic_doc)
        j["nodes"][1]["rule"] = {"name": "Mystery"}
        with pytest.raises(ParseError):
            parse_document(json.dumps(j))

    def test_unknown_keys_rejected(self, acyclic_doc):
        j = document_to_json(acyclic_doc)
        j["extra"] = True
        with pytest.raises(ParseError):
            parse_document(json.dumps(j))

    def test_missing_premise_reference(self, acyclic_doc):
        j = document_to_json(acyclic_doc)
        j["nodes"][0]["rule"]["premises"] = [1, 99]
        with pytest.raises(ParseError):
            parse_document(json.dumps(j))


class TestSemanticErrors:
    def test_duplicate_iaa_index(self, acyclic_doc):
        j = document_to_json(acyclic_doc)
        lhs = j["nodes"][2]["sequent"]["lhs"]
        lhs[1]["idx"] = lhs[0]["idx"]
        with pytest.raises(SemanticError):
            parse_document(json.dumps(j))

    def test_validation_failures_surface(self, hydra_doc):
        j = document_to_json(hydra_doc)
        j["buds"]["13"] = 14  # companion with a different sequent
        with pytest.raises(SemanticError):
            parse_document(json.dumps(j))


class TestCorpus:
    def test_entries_present(self):
        names = [d.name for d in builtin_corpus()]
        assert names == ["2-hydra", "2-hydra-unoptimized", "odd-implies-nat",
                         "stuttering", "acyclic", "two-root"]

    def test_every_entry_validates(self, corpus_docs):
        from cproof.core import validate_preproof
        for doc in corpus_docs:
            assert validate_preproof(doc.preproof, doc.system) == []

    def test_two_hydra_shape(self, hydra_doc):
        pp = hydra_doc.preproof
        assert len(pp.nodes) == 28
        assert pp.backlink_count() == 3
        assert hydra_doc.metadata["nodes"] == "28"
        assert hydra_doc.metadata["depth"] == "4"
        assert hydra_doc.metadata["backlinks"] == "3"
        assert "note" in hydra_doc.metadata  # the 27-vs-28 numbering alias

    def test_two_hydra_system_productions(self, hydra_doc):
        by_pred = {}
        for p in hydra_doc.system.productions:
            by_pred.setdefault(p.conclusion.predicate, []).append(p)
        assert len(by_pred["N"]) == 2
        assert len(by_pred["p"]) == 6

    def test_odd_implies_nat_reparses(self, odd_nat_doc):
        again = parse_document(serialize_document(odd_nat_doc))
        assert len(again.preproof.nodes) == 9
        assert again.preproof.backlink_count() == 1

    def test_stuttering_shape(self, stutter_doc):
        assert len(stutter_doc.preproof.nodes) == 2
        assert stutter_doc.preproof.backlink_count() == 1

    def test_acyclic_shape(self, acyclic_doc):
        assert acyclic_doc.preproof.backlink_count() == 0
