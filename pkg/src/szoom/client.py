"""Client for the engine service.

The CLI always talks to the service through this client. Without a server
URL it mounts the FastAPI app in-process over an ASGI transport, so the same
request/response path runs with or without a network hop.
"""

from __future__ import annotations

import httpx


class ServiceError(Exception):
    def __init__(self, status_code: int, detail: str):
        super().__init__(detail)
        self.status_code = status_code
        self.detail = detail


class EngineClient:
    def __init__(self, server: str | None = None, timeout: float = 3600.0):
        if server:
            self._client = httpx.Client(base_url=server, timeout=timeout)
        else:
            # drive the ASGI app in-process through a sync portal
            import warnings

            with warnings.catch_warnings():
                warnings.simplefilter("ignore", Warning)
                from starlette.testclient import TestClient

            from .service import create_app

            self._client = TestClient(create_app(), base_url="http://szoom.local")

    def close(self):
        self._client.close()

    def __enter__(self) -> "EngineClient":
        return self

    def __exit__(self, *exc):
        self.close()

    def _post(self, path: str, payload: dict) -> dict:
        resp = self._client.post(path, json=payload)
        if resp.status_code != 200:
            try:
                detail = resp.json().get("detail", resp.text)
            except ValueError:
                detail = resp.text
            raise ServiceError(resp.status_code, str(detail))
        return resp.json()

    def health(self) -> dict:
        resp = self._client.get("/health")
        if resp.status_code != 200:
            raise ServiceError(resp.status_code, resp.text)
        return resp.json()

    def run(
        self,
        input: str,
        out: str | None = None,
        trajectory: str | None = None,
        detections: str | None = None,
        mask: str | None = None,
        config: str | None = None,
        seed: int | None = None,
    ) -> dict:
        return self._post(
            "/run",
            {
                "input": input,
                "out": out,
                "trajectory": trajectory,
                "detections": detections,
                "mask": mask,
                "config": config,
                "seed": seed,
            },
        )

    def eval_prf(self, pred: str, truth: str) -> dict:
        return self._post("/eval/prf", {"pred": pred, "truth": truth})

    def eval_accuracy(self, trajectory: str, truth: str, frame_w: int, frame_h: int) -> dict:
        return self._post(
            "/eval/accuracy",
            {
                "trajectory": trajectory,
                "truth": truth,
                "frame_w": frame_w,
                "frame_h": frame_h,
            },
        )
