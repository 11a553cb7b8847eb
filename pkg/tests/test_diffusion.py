"""Conditioning, service client, and final compositing."""

import socket

import numpy as np
import pytest
from scipy import ndimage

from helpers import CLASS_NAMES, build_asset_dirs
from ocsynth.compositor import (
    AssetStore,
    CutPasteConfig,
    LayoutSpec,
    Placement2D,
    cutout_from_rgba,
    load_assets,
    render_composite,
    sample_layout,
)
from ocsynth.diffusion import (
    ConditioningPayload,
    GenerationParams,
    MockDiffusionService,
    arrangement_canvas,
    build_conditioning,
    composite_final,
    request_body,
    request_generation,
)
from ocsynth.errors import (
    DimensionMismatchError,
    ProtocolError,
    ServiceRejection,
    ServiceTimeout,
)
from ocsynth.imaging import Image, Mask, rgb_to_lab, lab_to_rgb

BALL = ndimage.generate_binary_structure(2, 2)
PARAMS = GenerationParams(positive_prompt="a cluttered workbench", steps=4)


@pytest.fixture(scope="module")
def assets(tmp_path_factory):
    root = tmp_path_factory.mktemp("assets")
    cut, bgs = build_asset_dirs(root)
    return load_assets(cut, bgs, CLASS_NAMES)


def _solid_cutout(h, w, color, label=0, ref="obj"):
    rgba = np.zeros((h, w, 4), dtype=np.uint8)
    rgba[:, :, :3] = color
    rgba[:, :, 3] = 255
    return cutout_from_rgba(Image(rgba), label, ref)


def _single_layout(cutout, position, frame_size):
    """One unrotated, unscaled placement: its frame mask is analytic."""
    placement = Placement2D(
        cutout_ref=cutout.instance_id,
        role="target",
        position=position,
        rotation=0.0,
        scale=1.0,
        blend_mode="direct",
        z_order=0,
    )
    return LayoutSpec(
        background_ref="", frame_size=frame_size, placements=(placement,), rng_seed=0
    )


def _placed_mask(cutout, position, frame_size):
    """Oracle placement of the cutout mask by plain slicing."""
    w, h = frame_size
    x, y = position
    out = np.zeros((h, w), dtype=bool)
    out[y : y + cutout.height, x : x + cutout.width] = cutout.mask.data.astype(bool)
    return out


# --- conditioning -------------------------------------------------------------


def test_empty_layout_all_zero_edge_map():
    layout = LayoutSpec(background_ref="", frame_size=(64, 48), placements=(), rng_seed=0)
    ref = Image(np.full((48, 64, 3), 77, dtype=np.uint8))
    payload = build_conditioning(layout, AssetStore(), ref, PARAMS, seed=9)
    assert payload.edge_map.data.sum() == 0
    assert (payload.edge_map.width, payload.edge_map.height) == (64, 48)


def test_edges_confined_to_dilated_mask():
    cut = _solid_cutout(30, 42, (250, 250, 250))
    layout = _single_layout(cut, (25, 17), (96, 80))
    store = AssetStore(cutouts={cut.instance_id: cut})
    ref = Image(np.zeros((80, 96, 3), dtype=np.uint8))

    payload = build_conditioning(layout, store, ref, PARAMS, seed=1)
    edges = payload.edge_map.data.astype(bool)
    allowed = ndimage.binary_dilation(
        _placed_mask(cut, (25, 17), (96, 80)), BALL, iterations=3
    )
    assert edges.any(), "a high-contrast object must produce edges"
    assert not (edges & ~allowed).any()


def test_payload_bytes_deterministic(assets):
    bg = assets.background("bg0.png")
    cfg = CutPasteConfig(blend_modes=("direct",))
    targets = [assets.cutouts[r] for r in assets.target_refs]
    layout = sample_layout(5, targets, [], bg, cfg, "bg0.png")
    a = build_conditioning(layout, assets, bg, PARAMS, seed=42)
    b = build_conditioning(layout, assets, bg, PARAMS, seed=42)
    assert request_body(a) == request_body(b)


def test_payload_invariants():
    edge = Mask(np.zeros((10, 12), dtype=np.uint8))
    ref = Image(np.zeros((10, 12, 3), dtype=np.uint8))
    with pytest.raises(ValueError):
        ConditioningPayload(edge, ref, "", "", 0, 0, 5.0, (12, 10))  # steps < 1
    with pytest.raises(ValueError):
        ConditioningPayload(edge, ref, "", "", 0, 4, 5.0, (12, 11))  # size mismatch


# --- service client -----------------------------------------------------------


def _tiny_payload(w=24, h=16):
    edge = Mask(np.zeros((h, w), dtype=np.uint8))
    rng = np.random.default_rng(3)
    ref = Image(rng.integers(0, 256, size=(h, w, 3), dtype=np.uint8))
    return ConditioningPayload(edge, ref, "", "", 7, 4, 5.0, (w, h))


def test_echo_fixture_byte_for_byte():
    payload = _tiny_payload()
    rng = np.random.default_rng(8)
    fixture = Image(rng.integers(0, 256, size=(16, 24, 3), dtype=np.uint8))
    with MockDiffusionService([("fixture", fixture)]) as mock:
        result = request_generation(mock.endpoint, payload, retries=0)
    assert np.array_equal(result.image.pixels, fixture.pixels)
    assert result.seed == 7


def test_retry_backoff_then_success():
    payload = _tiny_payload()
    sleeps = []
    with MockDiffusionService([("status", 500), ("status", 503)]) as mock:
        result = request_generation(
            mock.endpoint, payload, retries=3, sleep=sleeps.append
        )
        assert mock.request_count == 3  # initial attempt + 2 retries
    assert sleeps == [1.0, 2.0]
    assert (result.image.width, result.image.height) == (24, 16)


def test_rejection_never_retried():
    payload = _tiny_payload()
    sleeps = []
    with MockDiffusionService([("status", 422)]) as mock:
        with pytest.raises(ServiceRejection):
            request_generation(mock.endpoint, payload, retries=5, sleep=sleeps.append)
        assert mock.request_count == 1
    assert sleeps == []


def test_wrong_resolution_is_protocol_error():
    payload = _tiny_payload()
    with MockDiffusionService([("wrong_resolution",)]) as mock:
        with pytest.raises(ProtocolError):
            request_generation(mock.endpoint, payload, retries=2)
        assert mock.request_count == 1


def test_non_json_reply_is_protocol_error():
    payload = _tiny_payload()
    with MockDiffusionService([("garbage",)]) as mock:
        with pytest.raises(ProtocolError):
            request_generation(mock.endpoint, payload, retries=2)


def test_timeout_exhausts_retries():
    payload = _tiny_payload()
    sleeps = []
    with MockDiffusionService([("sleep", 0.5), ("sleep", 0.5)]) as mock:
        with pytest.raises(ServiceTimeout):
            request_generation(
                mock.endpoint, payload, timeout=0.05, retries=1, sleep=sleeps.append
            )
        assert mock.request_count == 2
    assert sleeps == [1.0]


def test_unreachable_endpoint():
    with socket.socket() as s:
        s.bind(("127.0.0.1", 0))
        port = s.getsockname()[1]
    with pytest.raises(ServiceTimeout):
        request_generation(
            f"http://127.0.0.1:{port}", _tiny_payload(), retries=1, sleep=lambda _: None
        )


# --- final compositing --------------------------------------------------------


def test_annotations_equal_compositor_oracle(assets):
    cfg = CutPasteConfig(blend_modes=("direct",))
    targets = [assets.cutouts[r] for r in assets.target_refs]
    distractors = [assets.cutouts[r] for r in assets.distractor_refs]
    bg = assets.background("bg0.png")
    rng = np.random.default_rng(17)
    for _ in range(100):
        layout = sample_layout(int(rng.integers(2**31)), targets, distractors, bg, cfg, "bg0.png")
        generated = Image(
            rng.integers(0, 256, size=(bg.height, bg.width, 3), dtype=np.uint8)
        )
        _, expected = render_composite(layout, assets)
        _, got = composite_final(generated, layout, assets)
        assert got.entries == expected.entries


def test_self_paste_keeps_object_interiors(assets):
    cut = _solid_cutout(26, 34, (40, 180, 90))
    layout = _single_layout(cut, (30, 21), (128, 96))
    store = AssetStore(cutouts={cut.instance_id: cut})
    generated = arrangement_canvas(layout, store)

    out, annotations = composite_final(generated, layout, store)
    interior = ndimage.binary_erosion(
        _placed_mask(cut, (30, 21), (128, 96)), BALL, iterations=2
    )
    diff = np.abs(
        out.pixels[interior].astype(int) - np.array([40, 180, 90])
    ).max()
    assert diff <= 1
    assert len(annotations.entries) == 1


def test_interior_changes_only_by_ring_shift():
    rng = np.random.default_rng(5)
    cut = _solid_cutout(22, 28, (160, 60, 200))
    layout = _single_layout(cut, (40, 30), (112, 88))
    store = AssetStore(cutouts={cut.instance_id: cut})
    base = np.clip(
        rng.normal(90, 25, size=(88, 112, 1)) + np.array([[[0.0, 20.0, 40.0]]]),
        0, 255,
    ).astype(np.uint8)
    generated = Image(base)

    out, _ = composite_final(generated, layout, store)

    mask = _placed_mask(cut, (40, 30), (112, 88))
    ring = ndimage.binary_dilation(mask, BALL, iterations=8) & ~mask
    gray_lab = rgb_to_lab(np.full((1, 1, 3), 128, dtype=np.uint8))[0, 0]
    shift = rgb_to_lab(generated.pixels[ring]).mean(axis=0) - gray_lab
    expected = lab_to_rgb(
        rgb_to_lab(np.array([[[160, 60, 200]]], dtype=np.uint8)) + shift
    )[0, 0]

    interior = ndimage.binary_erosion(mask, BALL, iterations=2)
    diff = np.abs(out.pixels[interior].astype(int) - expected.astype(int)).max()
    assert diff <= 1


def test_pixels_outside_objects_equal_generated(assets):
    cfg = CutPasteConfig(blend_modes=("direct",))
    targets = [assets.cutouts[r] for r in assets.target_refs]
    bg = assets.background("bg1.png")
    rng = np.random.default_rng(23)
    from ocsynth.compositor import place_in_frame
    from ocsynth.imaging import transform_cutout

    for seed in (1, 2, 3, 4, 5):
        layout = sample_layout(seed, targets, [], bg, cfg, "bg1.png")
        generated = Image(
            rng.integers(0, 256, size=(bg.height, bg.width, 3), dtype=np.uint8)
        )
        out, _ = composite_final(generated, layout, assets)
        union = np.zeros((bg.height, bg.width), dtype=bool)
        for p in layout.placements:
            moved = transform_cutout(assets.cutout(p.cutout_ref), p.rotation, p.scale)
            union |= place_in_frame(moved.mask.data, p.position, layout.frame_size)
        assert np.array_equal(out.pixels[~union], generated.pixels[~union])


def test_composite_rejects_wrong_canvas_size(assets):
    cfg = CutPasteConfig(blend_modes=("direct",))
    targets = [assets.cutouts[r] for r in assets.target_refs]
    bg = assets.background("bg0.png")
    layout = sample_layout(9, targets, [], bg, cfg, "bg0.png")
    generated = Image(np.zeros((10, 10, 3), dtype=np.uint8))
    with pytest.raises(DimensionMismatchError):
        composite_final(generated, layout, assets)


def test_empty_layout_composite_is_generated():
    layout = LayoutSpec(background_ref="", frame_size=(40, 30), placements=(), rng_seed=0)
    rng = np.random.default_rng(2)
    generated = Image(rng.integers(0, 256, size=(30, 40, 3), dtype=np.uint8))
    out, annotations = composite_final(generated, layout, AssetStore())
    assert np.array_equal(out.pixels, generated.pixels)
    assert annotations.entries == ()


# --- batch generation ----------------------------------------------------------


def test_dataset_parallel_runs_byte_identical(tmp_path):
    from ocsynth.diffusion import DiffusionDatasetConfig, generate_diffusion_dataset

    cut, bgs = build_asset_dirs(tmp_path / "assets", bg_size=(160, 128))
    digests = {}
    with MockDiffusionService() as mock:
        for workers in (4, 1):
            out = tmp_path / f"out{workers}"
            cfg = DiffusionDatasetConfig(
                cutouts_dir=str(cut),
                backgrounds_dir=str(bgs),
                out_dir=str(out),
                count=6,
                class_names=CLASS_NAMES,
                endpoint=mock.endpoint,
                frame_size=(160, 128),
                layout=CutPasteConfig(min_visible_px=150, blend_modes=("direct",)),
                workers=workers,
            )
            manifest = generate_diffusion_dataset(cfg, rng_seed=31)
            assert len(manifest.entries) == 6
            assert manifest.tag == "diffusion_cp"
            digests[workers] = {
                p.relative_to(out): p.read_bytes() for p in sorted(out.rglob("*")) if p.is_file()
            }
    assert digests[4] == digests[1]
    assert any(v for k, v in digests[1].items() if k.parts[0] == "labels")
