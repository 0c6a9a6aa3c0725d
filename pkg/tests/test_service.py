from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from fieldsuggest import load_engine
from fieldsuggest.cli import main
from fieldsuggest.service import create_app

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="module")
def client() -> TestClient:
    state = load_engine(FIXTURES / "table2_rules.jsonl")
    return TestClient(create_app(state))


def recommend_payload(**overrides):
    payload = {
        "targetField": {"fieldLabel": "tissue"},
        "context": [{"fieldLabel": "disease", "valueLabel": "meningitis"}],
    }
    payload.update(overrides)
    return payload


def test_health(client):
    response = client.get("/health")
    assert response.status_code == 200
    assert response.json()["status"] == "ok"


def test_recommend_worked_example(client):
    response = client.post("/recommend", json=recommend_payload())
    assert response.status_code == 200
    recs = response.json()["recommendations"]
    assert recs == [{"valueLabel": "brain", "valueType": None, "score": 1.0, "rank": 1}]


def test_recommend_empty_context_uses_support_ranking(client):
    response = client.post("/recommend", json=recommend_payload(context=[]))
    assert response.status_code == 200
    recs = response.json()["recommendations"]
    assert [r["valueLabel"] for r in recs] == ["brain", "liver"]
    assert recs[0]["score"] == 0.5


def test_recommend_options_respected(client):
    response = client.post(
        "/recommend",
        json=recommend_payload(context=[], options={"maxResults": 1}),
    )
    assert [r["valueLabel"] for r in response.json()["recommendations"]] == ["brain"]
    response = client.post(
        "/recommend",
        json=recommend_payload(context=[], options={"scoreCutoff": 0.4}),
    )
    assert [r["valueLabel"] for r in response.json()["recommendations"]] == ["brain"]


def test_recommend_malformed_bodies_are_400(client):
    assert client.post("/recommend", content=b"not json").status_code == 400
    assert client.post("/recommend", json={"context": []}).status_code == 400
    assert (
        client.post("/recommend", json=recommend_payload(targetField={"fieldLabel": ""})).status_code
        == 400
    )
    assert (
        client.post(
            "/recommend", json=recommend_payload(context=[{"fieldLabel": "x"}])
        ).status_code
        == 400
    )


def test_recommend_target_in_context_is_400(client):
    response = client.post(
        "/recommend",
        json=recommend_payload(context=[{"fieldLabel": "tissue", "valueLabel": "brain"}]),
    )
    assert response.status_code == 400
    assert "tissue" in response.json()["detail"]


def test_recommend_duplicate_context_field_is_400(client):
    response = client.post(
        "/recommend",
        json=recommend_payload(
            context=[
                {"fieldLabel": "disease", "valueLabel": "meningitis"},
                {"fieldLabel": "disease", "valueLabel": "cirrhosis"},
            ]
        ),
    )
    assert response.status_code == 400


def test_rules_endpoint_returns_selected_rules(client):
    response = client.get("/rules", params={"field": "tissue"})
    assert response.status_code == 200
    rules = response.json()["rules"]
    assert len(rules) == 8
    assert all(r["consequent"][0]["fieldLabel"] == "tissue" for r in rules)
    assert client.get("/rules", params={"field": "karyotype"}).json()["rules"] == []


def test_templates_endpoint_lists_field_inventory(client):
    response = client.get("/templates")
    assert response.status_code == 200
    templates = response.json()["templates"]
    assert len(templates) == 1
    assert templates[0]["templateId"] == "experiment"
    labels = [f["fieldLabel"] for f in templates[0]["fields"]]
    assert labels == ["disease", "sex", "tissue"]


def test_unknown_target_is_empty_list_not_error(client):
    response = client.post(
        "/recommend", json=recommend_payload(targetField={"fieldLabel": "karyotype"})
    )
    assert response.status_code == 200
    assert response.json()["recommendations"] == []


def test_concurrent_requests_are_isolated(client):
    with_context = recommend_payload()
    without_context = recommend_payload(context=[])

    def run(i: int):
        payload = with_context if i % 2 == 0 else without_context
        return i % 2, client.post("/recommend", json=payload).json()["recommendations"]

    with ThreadPoolExecutor(max_workers=8) as pool:
        results = list(pool.map(run, range(64)))
    for kind, recs in results:
        if kind == 0:
            assert [r["valueLabel"] for r in recs] == ["brain"]
        else:
            assert [r["valueLabel"] for r in recs] == ["brain", "liver"]


def test_cli_and_http_rankings_agree(client, capsys, tmp_path):
    code = main(
        [
            "recommend",
            "--rules",
            str(FIXTURES / "table2_rules.jsonl"),
            "--context",
            "disease=meningitis",
            "--target",
            "tissue",
        ]
    )
    assert code == 0
    cli_lines = [l for l in capsys.readouterr().out.splitlines() if l.strip()]
    http = client.post("/recommend", json=recommend_payload()).json()["recommendations"]
    assert len(cli_lines) == len(http)
    for line, rec in zip(cli_lines, http):
        assert rec["valueLabel"] in line
        assert f"{rec['score']:.4f}" in line


def test_cross_template_scenario_over_http(tmp_path):
    rules_path = tmp_path / "rules.jsonl"
    main(
        [
            "train",
            "--instances",
            str(FIXTURES / "cross_template_instances.jsonl"),
            "--mappings",
            str(FIXTURES / "cross_template_mappings.jsonl"),
            "--min-support",
            "1",
            "--min-confidence",
            "0.5",
            "--out",
            str(rules_path),
        ]
    )
    state = load_engine(rules_path, FIXTURES / "cross_template_mappings.jsonl")
    client = TestClient(create_app(state))
    response = client.post(
        "/recommend",
        json={
            "targetField": {
                "fieldLabel": "tissue",
                "fieldType": "http://ncicb.nci.nih.gov/xml/owl/EVS/Thesaurus.owl#C12801",
            },
            "context": [
                {
                    "fieldLabel": "cell type",
                    "fieldType": "http://www.ebi.ac.uk/efo/EFO_0000324",
                    "valueLabel": "pancreatic alpha cell",
                    "valueType": "http://purl.obolibrary.org/obo/BTO_0000990",
                }
            ],
        },
    )
    assert response.status_code == 200
    recs = response.json()["recommendations"]
    assert recs[0]["valueLabel"] == "pancreas"
    assert recs[0]["rank"] == 1
    assert recs[0]["valueType"] == "http://purl.obolibrary.org/obo/UBERON_0001264"
