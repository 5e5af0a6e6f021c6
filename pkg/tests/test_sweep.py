import pytest

from callscout.params import ParamError, params_from_wire
from callscout.scoring import AnalysisError
from callscout.stream import BinaryImage, CodeRegion
from callscout.sweep import (
    SweepSpec,
    default_granularity,
    run_sweep,
    search_code_region,
    sweep_to_csv,
    sweep_to_dict,
)
from callscout.synth import SynthSpec, generate

SYNTH = SynthSpec(
    instruction_length=32,
    call_opcode_length=6,
    ret_opcode_length=32,
    call_opcode=0x0C000000,
    ret_opcode=0x03E00008,
    function_count=12,
    noise_ratio=0.4,
    seed=21,
    ensure_all_called=True,
)


@pytest.fixture(scope="module")
def planted():
    image, truth = generate(SYNTH)
    return image, truth


def test_spec_validation():
    with pytest.raises(ParamError, match="sweepable"):
        SweepSpec(parameter="fileOffset", values=(1,))
    with pytest.raises(ParamError, match="non-empty"):
        SweepSpec(parameter="pcOffset", values=())
    with pytest.raises(ParamError, match="topN"):
        SweepSpec(parameter="pcOffset", values=(1,), top_n=0)


def test_points_preserve_input_order(planted):
    image, truth = planted
    spec = SweepSpec(
        parameter="returnToFunctionPrologueDistance", values=(3, 1, 2), top_n=1
    )
    result = run_sweep(image, truth.params, spec)
    assert [p.value for p in result.points] == [3, 1, 2]
    assert all(p.error is None for p in result.points)


def test_invalid_value_recorded_not_fatal(planted):
    image, truth = planted
    spec = SweepSpec(parameter="instructionLength", values=(32, 12, 64))
    result = run_sweep(image, truth.params, spec)
    assert result.points[0].error is None
    assert result.points[1].error is not None
    assert "multiple of 8" in result.points[1].error
    assert result.points[2].error is None


def test_sweep_points_match_independent_runs(planted):
    from callscout.pipeline import run_analysis

    image, truth = planted
    values = (1, 2, 4)
    spec = SweepSpec(parameter="returnToFunctionPrologueDistance", values=values)
    result = run_sweep(image, truth.params, spec)
    for value, point in zip(values, result.points):
        solo = run_analysis(
            image,
            truth.params.with_overrides(return_to_function_prologue_distance=value),
        )
        assert point.pairs[0] == solo.candidates[0].pair


def test_sweeps_are_pure(planted):
    image, truth = planted
    spec = SweepSpec(parameter="pcOffset", values=(0, 64, 128))
    assert run_sweep(image, truth.params, spec) == run_sweep(image, truth.params, spec)


def test_top_n_rows_in_csv(planted):
    image, truth = planted
    spec = SweepSpec(
        parameter="returnToFunctionPrologueDistance", values=(1, 2), top_n=3
    )
    result = run_sweep(image, truth.params, spec)
    csv_text = sweep_to_csv(result)
    lines = csv_text.strip().splitlines()
    assert lines[0] == "value,rank,score,callOpcode,retOpcode"
    rows = [line.split(",") for line in lines[1:]]
    assert len(rows) == sum(len(p.pairs) for p in result.points)
    assert [r[1] for r in rows[:3]] == ["0", "1", "2"]
    assert all(r[3].startswith("0x") for r in rows)


def test_errored_points_omitted_from_csv_but_kept_in_json(planted):
    image, truth = planted
    spec = SweepSpec(parameter="instructionLength", values=(12, 32))
    result = run_sweep(image, truth.params, spec)
    csv_text = sweep_to_csv(result)
    assert all(not line.startswith("12,") for line in csv_text.splitlines())
    payload = sweep_to_dict(result)
    assert payload["parameter"] == "instructionLength"
    assert "error" in payload["points"][0]
    assert payload["points"][1]["pairs"][0]["ocpScore"] == 1.0


def adversarial_image(truth_image, pad_words):
    # Padding words match the call mask but their +16M relative offset can
    # never land inside any region, so every region extending past the
    # planted code picks up unresolvable calls and scores below 1.0.
    pad = (0x0C000000 | (1 << 24)).to_bytes(4, "big") * pad_words
    return BinaryImage(data=pad + truth_image.data + pad)


@pytest.fixture(scope="module")
def planted_island():
    image, truth = generate(
        SynthSpec(
            instruction_length=32,
            call_opcode_length=6,
            ret_opcode_length=32,
            call_opcode=0x0C000000,
            ret_opcode=0x03E00008,
            function_count=30,
            calls_per_function=(1, 2),
            addressing="relative",
            noise_ratio=0.2,
            seed=33,
            ensure_all_called=True,
        )
    )
    return image, truth


def test_region_search_finds_planted_island(planted_island):
    image, truth = planted_island
    pad_words = 16
    framed = adversarial_image(image, pad_words)
    params = truth.params.with_overrides(file_offset=0, file_offset_end=None)
    ranked = search_code_region(framed, params, step_granularity=4)
    top = ranked[0].region
    planted_start = pad_words * 4
    planted_end = planted_start + len(image.data)
    overlap = max(
        0,
        min(top.file_offset_end, planted_end) - max(top.file_offset, planted_start),
    )
    assert overlap / (planted_end - planted_start) >= 0.9
    assert ranked[0].best.score == 1.0
    assert (top.file_offset, top.file_offset_end) == (planted_start, planted_end)


def test_region_ranking_monotone_and_whole_file_present(planted_island):
    image, truth = planted_island
    framed = adversarial_image(image, 16)
    params = truth.params.with_overrides(file_offset=0, file_offset_end=None)
    granularity = default_granularity(len(framed), 32)
    ranked = search_code_region(framed, params, granularity)
    scores = [r.best.score for r in ranked]
    assert scores == sorted(scores, reverse=True)
    whole = [r for r in ranked if (r.region.file_offset, r.region.file_offset_end) == (0, len(framed))]
    assert whole, "whole-file region missing from the grid"

    from callscout.pipeline import run_analysis

    direct = run_analysis(framed, params)
    assert whole[0].best == direct.candidates[0].pair


def test_region_search_rejects_small_images():
    tiny = BinaryImage(data=bytes(4 * 63))
    params = params_from_wire(
        {"instructionLength": 32, "retOpcodeLength": 32, "callOpcodeLength": 6}
    )
    with pytest.raises(AnalysisError, match="too small for region search"):
        search_code_region(tiny, params, 4)


def test_region_search_rejects_misaligned_granularity(planted_island):
    image, truth = planted_island
    with pytest.raises(AnalysisError, match="multiple"):
        search_code_region(image, truth.params, 6)
    with pytest.raises(AnalysisError, match="multiple"):
        search_code_region(image, truth.params, 0)


def test_default_granularity_is_aligned():
    for size in (256, 1000, 10_000, 2_000_000):
        g = default_granularity(size, 32)
        assert g % 4 == 0 and g >= 4


def test_region_search_region_bounds_hold(planted_island):
    image, truth = planted_island
    framed = adversarial_image(image, 16)
    params = truth.params.with_overrides(file_offset=0, file_offset_end=None)
    ranked = search_code_region(framed, params, default_granularity(len(framed), 32))
    for rs in ranked:
        assert rs.region.file_offset_end - rs.region.file_offset >= 64 * 4
        assert 0 <= rs.region.file_offset < rs.region.file_offset_end <= len(framed)
