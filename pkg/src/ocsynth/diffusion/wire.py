"""Wire encoding for the generation service.

The service speaks JSON over HTTP: rasters travel as base64 PNG strings.
Request bodies are serialized with sorted keys and no whitespace so the same
payload always produces the same bytes.
"""

from __future__ import annotations

import base64
import binascii
import io
import json
from typing import Any

import numpy as np
from PIL import Image as PilImage

from ..errors import ProtocolError
from ..imaging import Image, Mask


def png_bytes(pixels: np.ndarray) -> bytes:
    """Deterministic PNG encoding of an RGB/RGBA or single-channel array."""
    buf = io.BytesIO()
    PilImage.fromarray(pixels).save(buf, format="PNG", compress_level=1)
    return buf.getvalue()


def encode_image(image: Image) -> str:
    return base64.b64encode(png_bytes(image.pixels)).decode("ascii")


def encode_mask(mask: Mask) -> str:
    return base64.b64encode(png_bytes(mask.data * np.uint8(255))).decode("ascii")


def decode_image(b64: str) -> Image:
    """Decode a base64 PNG to an RGB image; raises ProtocolError on garbage."""
    try:
        raw = base64.b64decode(b64, validate=True)
        with PilImage.open(io.BytesIO(raw)) as pil:
            pixels = np.asarray(pil.convert("RGB"), dtype=np.uint8).copy()
    except (binascii.Error, OSError, ValueError) as exc:
        raise ProtocolError(f"response image is not a decodable PNG: {exc}") from exc
    return Image(pixels)


def request_body(payload) -> bytes:
    """Serialized POST body for a :class:`ConditioningPayload`."""
    width, height = payload.resolution
    doc = {
        "edge_map": encode_mask(payload.edge_map),
        "ip_image": encode_image(payload.reference_background),
        "prompt": payload.positive_prompt,
        "negative_prompt": payload.negative_prompt,
        "seed": payload.seed,
        "steps": payload.steps,
        "cfg": payload.guidance,
        "width": width,
        "height": height,
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":")).encode("utf-8")


def parse_response(body: bytes, resolution: tuple[int, int]) -> tuple[Image, int]:
    """Decode a service response; enforce the requested resolution.

    Returns (image, echoed seed). Any shape of non-conformance — non-JSON
    body, missing keys, undecodable image, wrong dimensions — raises
    ProtocolError.
    """
    try:
        doc: Any = json.loads(body.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise ProtocolError(f"response body is not JSON: {exc}") from exc
    if not isinstance(doc, dict) or "image" not in doc or "seed" not in doc:
        raise ProtocolError("response JSON must carry 'image' and 'seed'")
    image = decode_image(doc["image"])
    if (image.width, image.height) != tuple(resolution):
        raise ProtocolError(
            f"service returned {image.width}x{image.height}, "
            f"requested {resolution[0]}x{resolution[1]}"
        )
    try:
        seed = int(doc["seed"])
    except (TypeError, ValueError) as exc:
        raise ProtocolError(f"response seed is not an integer: {doc['seed']!r}") from exc
    return image, seed
