"""Command-line interface: analyze a binary, serve the HTTP API, or emit
synthetic test binaries.

Analysis flags carry exactly the public parameter names
(``--instructionLength``, ``--endiannes`` with the ``--endianness`` alias,
...).  A JSON config file with the same field names can supply any subset;
explicit flags win over the config.  Failures print a machine-readable JSON
object on standard error and exit nonzero.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .params import ENDIANNESS_WIRE, ParamError, parse_int, params_from_wire
from .pipeline import result_to_json, run_analysis
from .scoring import AnalysisError
from .stream import StreamError, load_image
from .sweep import SWEEPABLE, SweepSpec, run_sweep, sweep_to_csv
from .graph import export_graph

_INT_FLAGS = (
    "instructionLength",
    "retOpcodeLength",
    "callOpcodeLength",
    "fileOffset",
    "fileOffsetEnd",
    "pcOffset",
    "pcIncPerInstr",
    "nrCandidates",
    "returnToFunctionPrologueDistance",
)
_RANGE_FLAGS = ("callCandidateRange", "retCandidateRange")
_BOOL_FLAGS = ("unknownCodeEntry", "includeInstructions", "isRelativeAddressing")


def _add_param_flags(parser: argparse.ArgumentParser):
    for name in _INT_FLAGS:
        parser.add_argument(f"--{name}", dest=name, default=None, metavar="N")
    parser.add_argument(
        "--endiannes",
        "--endianness",
        dest=ENDIANNESS_WIRE,
        default=None,
        choices=("big", "little"),
    )
    for name in _RANGE_FLAGS:
        parser.add_argument(
            f"--{name}", dest=name, default=None, metavar="START,END"
        )
    for name in _BOOL_FLAGS:
        parser.add_argument(
            f"--{name}", dest=name, action="store_const", const=True, default=None
        )


def _wire_params(args: argparse.Namespace) -> dict:
    """Merge config-file values under explicitly given flags."""
    wire: dict = {}
    if args.config is not None:
        with open(args.config) as fh:
            loaded = json.load(fh)
        if not isinstance(loaded, dict):
            raise ParamError([("config", "config file must hold a JSON object")])
        wire.update(loaded)
    for name in _INT_FLAGS + _RANGE_FLAGS + _BOOL_FLAGS + (ENDIANNESS_WIRE,):
        value = getattr(args, name)
        if value is None:
            continue
        if name in _RANGE_FLAGS:
            parts = value.split(",")
            if len(parts) != 2:
                raise ParamError([(name, "expected START,END")])
            wire[name] = [p.strip() for p in parts]
        else:
            wire[name] = value
    return wire


def _fail(payload: dict) -> int:
    json.dump({"error": payload}, sys.stderr, indent=2)
    sys.stderr.write("\n")
    return 1


def _cmd_analyze(args: argparse.Namespace) -> int:
    try:
        params = params_from_wire(_wire_params(args))
        image = load_image(args.binary)

        if args.sweep is not None:
            if args.sweepValues is None:
                raise ParamError([("sweepValues", "required with --sweep")])
            values = tuple(
                parse_int(v.strip(), args.sweep) for v in args.sweepValues.split(",")
            )
            spec = SweepSpec(parameter=args.sweep, values=values, top_n=args.sweepTopN)
            result = run_sweep(image, params, spec)
            sys.stdout.write(sweep_to_csv(result))
            return 0

        result = run_analysis(image, params)
        sys.stdout.write(result_to_json(result))
        if args.dot is not None:
            os.makedirs(args.dot, exist_ok=True)
            for report in result.candidates:
                path = os.path.join(args.dot, f"candidate_{report.rank}.dot")
                with open(path, "w") as fh:
                    fh.write(export_graph(report.graph, "dot"))
        return 0
    except ParamError as exc:
        return _fail({"details": exc.as_details()})
    except (StreamError, AnalysisError, OSError, json.JSONDecodeError) as exc:
        return _fail({"message": str(exc)})


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(storage_dir=args.storage, ui_dir=args.ui)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return 0


def _cmd_synth(args: argparse.Namespace) -> int:
    from .synth import InfeasibleSpecError, SynthSpec, generate, write_with_sidecar

    try:
        lo_hi = args.callsPerFunction.split(",")
        if len(lo_hi) != 2:
            raise ParamError([("callsPerFunction", "expected LO,HI")])
        spec = SynthSpec(
            instruction_length=args.instructionLength,
            call_opcode_length=args.callOpcodeLength,
            ret_opcode_length=args.retOpcodeLength,
            call_opcode=int(args.callOpcode, 0),
            ret_opcode=int(args.retOpcode, 0),
            function_count=args.functionCount,
            calls_per_function=(int(lo_hi[0]), int(lo_hi[1])),
            addressing="relative" if args.isRelativeAddressing else "absolute",
            pc_offset=int(args.pcOffset, 0),
            pc_inc_per_instr=args.pcIncPerInstr,
            noise_ratio=args.noiseRatio,
            endianness=getattr(args, ENDIANNESS_WIRE),
            seed=args.seed,
            ensure_all_called=args.ensureAllCalled,
            uncalled_prefix=args.uncalledPrefix,
        )
        image, truth = generate(spec)
        sidecar = write_with_sidecar(args.out, image, truth)
        json.dump(
            {
                "binary": args.out,
                "truth": sidecar,
                "bytes": len(image),
                "functions": len(truth.function_entries),
                "plantedCalls": len(truth.planted_edges),
            },
            sys.stdout,
            indent=2,
        )
        sys.stdout.write("\n")
        return 0
    except (ParamError, InfeasibleSpecError, ValueError, OSError) as exc:
        if isinstance(exc, ParamError):
            return _fail({"details": exc.as_details()})
        return _fail({"message": str(exc)})


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="callscout",
        description="Detect call/return opcodes in unknown fixed-width ISAs "
        "and reconstruct call graphs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="analyze one binary file")
    analyze.add_argument("binary", help="path to the raw binary")
    analyze.add_argument("--config", default=None, help="JSON file with parameters")
    _add_param_flags(analyze)
    analyze.add_argument("--dot", default=None, metavar="DIR",
                         help="also write one DOT file per candidate")
    analyze.add_argument("--sweep", default=None, choices=SWEEPABLE,
                         help="sweep this parameter instead of a single run")
    analyze.add_argument("--sweepValues", default=None, metavar="V1,V2,...")
    analyze.add_argument("--sweepTopN", type=int, default=1, metavar="N")
    analyze.set_defaults(func=_cmd_analyze)

    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.add_argument("--storage", default=None,
                       help="binary/result store directory (default: env or cwd)")
    serve.add_argument("--ui", default=None,
                       help="static frontend directory to mount at /")
    serve.set_defaults(func=_cmd_serve)

    synth = sub.add_parser("synth", help="generate a synthetic test binary")
    synth.add_argument("--out", required=True, help="output binary path")
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--instructionLength", type=int, default=32)
    synth.add_argument("--callOpcodeLength", type=int, default=6)
    synth.add_argument("--retOpcodeLength", type=int, default=32)
    synth.add_argument("--callOpcode", default="0x0C000000")
    synth.add_argument("--retOpcode", default="0x03E00008")
    synth.add_argument("--functionCount", type=int, default=10)
    synth.add_argument("--callsPerFunction", default="1,3", metavar="LO,HI")
    synth.add_argument("--noiseRatio", type=float, default=0.3)
    synth.add_argument("--pcOffset", default="0")
    synth.add_argument("--pcIncPerInstr", type=int, default=1)
    synth.add_argument("--endiannes", "--endianness", dest=ENDIANNESS_WIRE,
                       default="big", choices=("big", "little"))
    synth.add_argument("--isRelativeAddressing", action="store_true")
    synth.add_argument("--ensureAllCalled", action="store_true")
    synth.add_argument("--uncalledPrefix", type=int, default=0)
    synth.set_defaults(func=_cmd_synth)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
