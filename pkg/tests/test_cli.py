import json
import subprocess
import sys

import pytest

from callscout.cli import main
from callscout.graph import export_graph
from callscout.pipeline import result_to_json, run_analysis
from callscout.stream import load_image
from callscout.sweep import SweepSpec, run_sweep, sweep_to_csv
from callscout.synth import SynthSpec, generate, write_with_sidecar

SPEC = SynthSpec(
    instruction_length=32,
    call_opcode_length=6,
    ret_opcode_length=32,
    call_opcode=0x0C000000,
    ret_opcode=0x03E00008,
    function_count=9,
    noise_ratio=0.4,
    seed=17,
    ensure_all_called=True,
)
FLAGS = [
    "--instructionLength", "32",
    "--callOpcodeLength", "6",
    "--retOpcodeLength", "32",
    "--returnToFunctionPrologueDistance", "1",
]


@pytest.fixture(scope="module")
def binary(tmp_path_factory):
    image, truth = generate(SPEC)
    path = tmp_path_factory.mktemp("cli") / "planted.bin"
    write_with_sidecar(str(path), image, truth)
    return str(path), truth


def run_cli(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_analyze_writes_result_json(binary, capsys):
    path, truth = binary
    code, out, err = run_cli(["analyze", path, *FLAGS], capsys)
    assert code == 0
    assert err == ""
    result = json.loads(out)
    assert len(result["candidates"]) <= result["params"]["nrCandidates"]
    top = result["candidates"][0]
    assert (top["callOpcode"], top["retOpcode"]) == ("0x0C000000", "0x03E00008")
    assert top["ocpScore"] == 1.0
    assert result["diagnostics"]["instructionCount"] > 0


def test_cli_output_is_the_canonical_serialization(binary, capsys):
    path, truth = binary
    _, out, _ = run_cli(["analyze", path, *FLAGS], capsys)
    expected = result_to_json(
        run_analysis(load_image(path), truth.params.with_overrides(
            call_candidate_range=(0, 20), ret_candidate_range=(0, 10)))
    )
    assert out == expected


def test_config_file_merged_under_flags(binary, capsys, tmp_path):
    path, _ = binary
    config = tmp_path / "cfg.json"
    config.write_text(json.dumps({
        "instructionLength": 32,
        "callOpcodeLength": 8,
        "retOpcodeLength": 32,
        "returnToFunctionPrologueDistance": 6,
    }))
    code, out, _ = run_cli(
        ["analyze", path, "--config", str(config), "--callOpcodeLength", "6"], capsys
    )
    assert code == 0
    result = json.loads(out)
    assert result["params"]["callOpcodeLength"] == 6  # flag wins
    assert result["params"]["returnToFunctionPrologueDistance"] == 6  # config kept


def test_dot_files_written_per_candidate(binary, capsys, tmp_path):
    path, truth = binary
    dot_dir = tmp_path / "dots"
    code, out, _ = run_cli(["analyze", path, *FLAGS, "--dot", str(dot_dir)], capsys)
    assert code == 0
    result = json.loads(out)
    files = sorted(p.name for p in dot_dir.iterdir())
    assert files == [f"candidate_{k}.dot" for k in range(len(result["candidates"]))]
    analysis = run_analysis(load_image(path), truth.params.with_overrides(
        call_candidate_range=(0, 20), ret_candidate_range=(0, 10)))
    assert (dot_dir / "candidate_0.dot").read_text() == export_graph(
        analysis.candidates[0].graph, "dot"
    )


def test_invalid_params_fail_with_json_on_stderr(binary, capsys):
    path, _ = binary
    code, out, err = run_cli(
        ["analyze", path, "--instructionLength", "32", "--callOpcodeLength", "32",
         "--retOpcodeLength", "32"],
        capsys,
    )
    assert code == 1
    assert out == ""
    payload = json.loads(err)
    fields = {d["field"] for d in payload["error"]["details"]}
    assert "callOpcodeLength" in fields


def test_missing_binary_fails_with_message(capsys):
    code, _, err = run_cli(["analyze", "/nonexistent.bin", *FLAGS], capsys)
    assert code == 1
    assert "no such file" in json.loads(err)["error"]["message"]


def test_hex_pc_offset_flag(binary, capsys):
    path, _ = binary
    code, out, _ = run_cli(["analyze", path, *FLAGS, "--pcOffset", "0x40"], capsys)
    assert code == 0
    assert json.loads(out)["params"]["pcOffset"] == 64


def test_endianness_alias_flag(binary, capsys):
    path, _ = binary
    code, out, _ = run_cli(["analyze", path, *FLAGS, "--endianness", "little"], capsys)
    assert code == 0
    assert json.loads(out)["params"]["endiannes"] == "little"


def test_sweep_emits_csv(binary, capsys):
    path, truth = binary
    code, out, _ = run_cli(
        ["analyze", path, *FLAGS,
         "--sweep", "returnToFunctionPrologueDistance", "--sweepValues", "1,2,3"],
        capsys,
    )
    assert code == 0
    base = truth.params.with_overrides(
        call_candidate_range=(0, 20), ret_candidate_range=(0, 10)
    )
    expected = sweep_to_csv(
        run_sweep(
            load_image(path),
            base,
            SweepSpec(parameter="returnToFunctionPrologueDistance", values=(1, 2, 3)),
        )
    )
    assert out == expected


def test_sweep_values_required(binary, capsys):
    path, _ = binary
    code, _, err = run_cli(
        ["analyze", path, *FLAGS, "--sweep", "pcOffset"], capsys
    )
    assert code == 1
    assert json.loads(err)["error"]["details"][0]["field"] == "sweepValues"


def test_sweep_accepts_hex_pc_offset_values(binary, capsys):
    path, _ = binary
    code, out, _ = run_cli(
        ["analyze", path, *FLAGS, "--sweep", "pcOffset", "--sweepValues", "0,0x40"],
        capsys,
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[1].startswith("0,")
    assert lines[2].startswith("64,")


def test_synth_subcommand_round_trips(tmp_path, capsys):
    out_path = tmp_path / "gen.bin"
    code, out, _ = run_cli(
        ["synth", "--out", str(out_path), "--seed", "11", "--functionCount", "7",
         "--noiseRatio", "0.3", "--ensureAllCalled"],
        capsys,
    )
    assert code == 0
    summary = json.loads(out)
    assert summary["functions"] == 7
    assert out_path.read_bytes()
    truth = json.loads((tmp_path / "gen.bin.truth.json").read_text())
    assert len(truth["functionEntries"]) == 7

    code, out, _ = run_cli(
        ["analyze", str(out_path), *FLAGS], capsys
    )
    assert code == 0
    top = json.loads(out)["candidates"][0]
    assert (top["callOpcode"], top["retOpcode"]) == ("0x0C000000", "0x03E00008")
    assert top["ocpScore"] == 1.0


def test_synth_infeasible_spec_reports_error(tmp_path, capsys):
    code, _, err = run_cli(
        ["synth", "--out", str(tmp_path / "x.bin"), "--callOpcode", "0x0C000001"],
        capsys,
    )
    assert code == 1
    assert "canonical" in json.loads(err)["error"]["message"]


def test_console_entry_point_matches_main(binary, capsys):
    path, _ = binary
    _, expected, _ = run_cli(["analyze", path, *FLAGS], capsys)
    proc = subprocess.run(
        [sys.executable, "-m", "callscout.cli", "analyze", path, *FLAGS],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout == expected
