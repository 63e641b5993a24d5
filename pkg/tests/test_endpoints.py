from services.coefficients import SkeinValue, UNKNOT


def test_root(client):
    response = client.get("/")
    assert response.status_code == 200
    assert response.json()["message"] == "Annulus Skein API"


def test_homfly_unknot(client):
    response = client.post("/homfly/", json={"strands": 1, "word": []})
    assert response.status_code == 200
    body = response.json()
    assert body["value"] == str(UNKNOT)
    assert body["normalization"] == "framed"


def test_homfly_unframed_hopf(client):
    response = client.post("/homfly/", json={"strands": 2, "word": [1, 1], "normalization": "unframed"})
    assert response.status_code == 200
    body = response.json()
    assert body["framing_monomial"] == "a^2"
    assert SkeinValue.parse(body["value"]) == UNKNOT * UNKNOT / SkeinValue.parse("a^2") + SkeinValue.parse(
        "q^(1/2) - q^(-1/2)"
    ) * UNKNOT / SkeinValue.parse("a")


def test_homfly_rejects_bad_generators(client):
    assert client.post("/homfly/", json={"strands": 2, "word": [3]}).status_code == 400
    assert client.post("/homfly/", json={"strands": 2, "word": [0]}).status_code == 422


def test_colored(client):
    request = {"braid": {"strands": 2, "word": [1, 1]}, "partition": [2], "components": [0]}
    response = client.post("/homfly/colored", json=request)
    assert response.status_code == 200
    assert response.json()["components"] == [0]


def test_colored_scope(client):
    response = client.post("/homfly/colored", json={"braid": {"strands": 1, "word": []}, "partition": [3]})
    assert response.status_code == 422
    response = client.post("/homfly/colored", json={"braid": {"strands": 1, "word": []}, "partition": [1, 2]})
    assert response.status_code == 400


def test_psi(client):
    response = client.get("/ov/psi", params={"degree": 1})
    assert response.status_code == 200
    body = response.json()
    assert body["text"] == "W_∅⊗W_∅ + γ·W_(1)⊗W_(1)"
    assert body["terms"][1]["framing_tag"] == [1, 0, 0]


def test_kernel(client):
    response = client.get("/ov/kernel", params={"degree": 3})
    assert response.status_code == 200
    assert len(response.json()) == 3


def test_partition_function(client):
    response = client.get("/ov/partition-function", params={"link": "hopf", "degree": 1})
    assert response.status_code == 200
    coefficients = response.json()["coefficients"]
    assert coefficients[0]["value"] == str(UNKNOT)
    assert coefficients[1]["cross_checked"] is True

    assert client.get("/ov/partition-function", params={"link": "hopf", "degree": 3}).status_code == 422


def test_verify(client):
    response = client.get("/ov/verify", params={"degree": 1, "trials": 5})
    assert response.status_code == 200
    assert all(report["status"] == "pass" for report in response.json())
    assert client.get("/ov/verify", params={"degree": 40}).status_code == 422
