import concurrent.futures

import numpy as np
import pytest
from fastapi.testclient import TestClient

from latentring.decoder import decode
from latentring.images import decode_png
from latentring.server import create_app
from latentring.store import SampleStore


@pytest.fixture
def client(tmp_path):
    app = create_app(store=SampleStore(tmp_path / "store"))
    with TestClient(app) as c:
        yield c


def generate(client, latent, seq=0):
    return client.post("/api/generate", json={"latent": latent, "seq": seq})


class TestGenerate:
    def test_zero_vector_matches_decode(self, client):
        resp = generate(client, [0.0] * 512, seq=3)
        assert resp.status_code == 200
        assert resp.headers["content-type"] == "image/png"
        assert resp.headers["x-seq"] == "3"
        img = decode_png(resp.content)
        assert np.array_equal(img, decode(np.zeros(512)))

    def test_wrong_length_is_400(self, client):
        resp = generate(client, [0.0] * 511)
        assert resp.status_code == 400
        assert "512" in resp.json()["detail"]

    def test_non_finite_is_400(self, client):
        # raw bodies with NaN/Infinity literals parse on the server side and
        # must be rejected there
        for literal in ("NaN", "Infinity", "-Infinity"):
            body = '{"latent": [' + literal + ", " + ", ".join(["0"] * 511) + '], "seq": 0}'
            resp = client.post(
                "/api/generate", content=body, headers={"content-type": "application/json"}
            )
            assert resp.status_code == 400

    def test_non_numeric_is_400(self, client):
        latent = [0.0] * 512
        latent[0] = "x"
        assert generate(client, latent).status_code == 400

    def test_out_of_range_is_clamped(self, client):
        latent = [0.0] * 512
        latent[1] = 4.2
        resp = generate(client, latent)
        assert resp.status_code == 200
        clamped = np.zeros(512)
        clamped[1] = 3.0
        assert np.array_equal(decode_png(resp.content), decode(clamped))

    def test_statelessness(self, client, rng):
        z = rng.uniform(-3, 3, 512).tolist()
        first = generate(client, z, seq=1).content
        generate(client, rng.uniform(-3, 3, 512).tolist(), seq=2)
        again = generate(client, z, seq=3).content
        assert first == again

    def test_concurrent_identical_requests_identical_bodies(self, client, rng):
        z = rng.uniform(-3, 3, 512).tolist()
        with concurrent.futures.ThreadPoolExecutor(max_workers=32) as pool:
            futures = [pool.submit(generate, client, z, 5) for _ in range(32)]
            bodies = {f.result().content for f in futures}
        assert len(bodies) == 1


class TestConfig:
    def test_config_payload(self, client):
        cfg = client.get("/api/config").json()
        assert cfg == {
            "dims": 512,
            "image_size": 512,
            "v_max": 3.0,
            "defaults": {"sensitivity": 2.0, "decay_rate": 0.7, "brush_sigma": 1.5},
        }


class TestSamples:
    def test_save_list_restore_delete_cycle(self, client, rng):
        z = rng.uniform(-3, 3, 512).tolist()
        rec = client.post("/api/samples", json={"latent": z}).json()
        assert set(rec) == {"id", "created_at", "latent"}
        assert rec["latent"] == z  # float round trip through JSON is exact

        listing = client.get("/api/samples").json()
        assert [r["id"] for r in listing] == [rec["id"]]
        assert listing[0]["latent"] == z

        thumb = client.get(f"/api/samples/{rec['id']}/thumbnail")
        assert thumb.status_code == 200
        assert decode_png(thumb.content).shape == (128, 128)

        assert client.delete(f"/api/samples/{rec['id']}").status_code == 200
        assert client.get("/api/samples").json() == []

    def test_save_validates_latent(self, client):
        resp = client.post("/api/samples", json={"latent": [0.0] * 10})
        assert resp.status_code == 400

    def test_delete_unknown_is_404(self, client):
        resp = client.delete("/api/samples/zzz")
        assert resp.status_code == 404
        assert resp.json()["detail"] == "not found"

    def test_sample_order_preserved(self, client, rng):
        ids = []
        for _ in range(3):
            z = rng.uniform(-3, 3, 512).tolist()
            ids.append(client.post("/api/samples", json={"latent": z}).json()["id"])
        listing = [r["id"] for r in client.get("/api/samples").json()]
        assert listing == ids


class TestAtlasRoute:
    def test_atlas_served_when_configured(self, tmp_path, rng):
        from latentring.images import save_png

        atlas_path = tmp_path / "montage.png"
        save_png(atlas_path, (rng.random((64, 64)) * 255).astype(np.uint8))
        app = create_app(atlas=str(atlas_path))
        with TestClient(app) as c:
            resp = c.get("/atlas.png")
            assert resp.status_code == 200
            assert resp.headers["content-type"] == "image/png"
