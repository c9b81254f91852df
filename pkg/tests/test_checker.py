import json
import random

import pytest

from cproof.checker import (
    certificate_failure,
    certificate_from_json,
    certificate_to_json,
    check_poly,
    parse_certificate,
    serialize_certificate,
    verify_certificate,
)
from cproof.proof_format import SemanticError
from conftest import make_random_docs


class TestCheckPoly:
    def test_two_hydra_valid(self, hydra_doc):
        verdict = check_poly(hydra_doc)
        assert verdict.status == "Valid"
        assert verdict.certificate is not None
        assert dict(verdict.certificate.measures)[0] == (1, 2)
        assert len(verdict.certificate.paths) == 3

    def test_acyclic_valid_with_empty_sections(self, acyclic_doc):
        verdict = check_poly(acyclic_doc)
        assert verdict.status == "Valid"
        cert = verdict.certificate
        assert cert.paths == ()
        assert all(items == () for _, items in cert.measures)

    def test_stuttering_unknown_names_the_path(self, stutter_doc):
        verdict = check_poly(stutter_doc)
        assert verdict.status == "Unknown"
        assert verdict.certificate is None
        assert "0 to 1" in verdict.reason

    def test_two_root_valid_after_refinement(self, two_root_doc):
        verdict = check_poly(two_root_doc)
        assert verdict.status == "Valid"
        measures = dict(verdict.certificate.measures)
        assert measures[0] == (1, 1, 2)
        assert measures[2] == (1, 1)

    def test_rejects_ill_formed_documents(self, hydra_doc):
        from cproof.core import Node, PreProof, Backlink
        pp = hydra_doc.preproof
        nodes = dict(pp.nodes)
        nodes[13] = Node(nodes[14].sequent, Backlink(0), ())
        bad = hydra_doc.__class__(hydra_doc.system,
                                  PreProof(nodes, pp.root, pp.induction_fn),
                                  dict(hydra_doc.metadata))
        with pytest.raises(SemanticError):
            check_poly(bad)

    def test_certificates_are_deterministic(self, corpus_docs):
        for doc in corpus_docs:
            first = check_poly(doc)
            second = check_poly(doc)
            if first.certificate is None:
                assert second.certificate is None
                continue
            assert serialize_certificate(first.certificate) == \
                serialize_certificate(second.certificate)


class TestCertificates:
    def test_round_trip(self, hydra_doc):
        cert = check_poly(hydra_doc).certificate
        again = parse_certificate(serialize_certificate(cert))
        assert again == cert

    def test_ccert_file_round_trip(self, hydra_doc, tmp_path):
        cert = check_poly(hydra_doc).certificate
        path = tmp_path / "2hydra.ccert"
        path.write_text(serialize_certificate(cert), encoding="utf-8")
        again = parse_certificate(path.read_text(encoding="utf-8"))
        assert again == cert and verify_certificate(hydra_doc, again)

    def test_replay_accepts_fresh_certificates(self, corpus_docs):
        for doc in corpus_docs:
            verdict = check_poly(doc)
            if verdict.certificate is not None:
                assert verify_certificate(doc, verdict.certificate), \
                    certificate_failure(doc, verdict.certificate)

    def test_replay_accepts_random_valid_runs(self):
        accepted = 0
        for doc in make_random_docs(120, seed=918):
            verdict = check_poly(doc)
            if verdict.status != "Valid":
                continue
            assert verify_certificate(doc, verdict.certificate)
            accepted += 1
        assert accepted > 20

    def test_deleted_matching_edge_rejected(self, hydra_doc):
        cert = check_poly(hydra_doc).certificate
        j = certificate_to_json(cert)
        assert j["paths"][0]["matching"]
        j["paths"][0]["matching"] = j["paths"][0]["matching"][1:]
        broken = certificate_from_json(j)
        assert not verify_certificate(hydra_doc, broken)

    def test_mutations_rejected(self, hydra_doc, two_root_doc):
        rng = random.Random(5150)
        rejected = 0
        for doc in (hydra_doc, two_root_doc):
            cert = check_poly(doc).certificate
            base = certificate_to_json(cert)
            for _ in range(25):
                j = json.loads(json.dumps(base))
                mutated = mutate_certificate(j, rng)
                broken = certificate_from_json(mutated)
                failure = certificate_failure(doc, broken)
                assert failure is not None
                rejected += 1
        assert rejected == 50


def mutate_certificate(j, rng):
    """One random structural corruption; every kind must be caught."""
    kind = rng.choice(["drop-matching", "flip-flag", "grow-measure",
                       "shrink-measure", "break-witness", "rewire-path",
                       "rename-root", "drop-component"])
    paths = j["paths"]
    if kind == "drop-matching" and paths and paths[0]["matching"]:
        paths[0]["matching"] = paths[0]["matching"][1:]
    elif kind == "flip-flag" and paths and paths[0]["matching"]:
        b, r, f = paths[0]["matching"][0]
        paths[0]["matching"][0] = [b, r, not f]
    elif kind == "grow-measure":
        key = sorted(j["measures"])[0]
        j["measures"][key] = j["measures"][key] + [99]
    elif kind == "shrink-measure":
        key = max(j["measures"], key=lambda k: len(j["measures"][k]))
        j["measures"][key] = j["measures"][key][1:]
    elif kind == "break-witness" and paths and paths[0]["witnesses"]:
        w = paths[0]["witnesses"][0]
        w["occurrences"][1][1] += 7
    elif kind == "rewire-path" and paths:
        paths[0]["nodes"] = list(reversed(paths[0]["nodes"]))
    elif kind == "rename-root":
        j["normalized"]["roots"] = [r + 1 for r in j["normalized"]["roots"]]
    else:
        j["sccs"]["components"] = j["sccs"]["components"][1:]
    return j


class TestContainment:
    def test_poly_valid_implies_oracle_valid_sample(self):
        from cproof.oracle import check_buchi
        for doc in make_random_docs(80, seed=606):
            if check_poly(doc).status == "Valid":
                assert check_buchi(doc).status == "Valid", doc.name
