"""Sweep analysis parameters one at a time and save the score curves.

Runs against either a real binary (--binary plus --params, a JSON file of
wire-format parameters) or a synthetic one (--synth-seed). One CSV per swept
parameter is written to --out, and the best pair per value is printed so the
curves can be eyeballed without opening the files.
"""

import argparse
import json
import sys
from pathlib import Path

from callscout.params import params_from_wire, parse_int
from callscout.scoring import hex_word
from callscout.stream import load_image
from callscout.sweep import SWEEPABLE, SweepSpec, run_sweep, sweep_to_csv
from callscout.synth import SynthSpec, generate

DEFAULT_VALUES = {
    "instructionLength": [8, 16, 24, 32, 40, 48, 56, 64],
    "callOpcodeLength": [1, 2, 3, 4, 5, 6, 7, 8, 10, 12, 14, 16],
    "retOpcodeLength": [4, 8, 12, 16, 20, 24, 28, 32],
    "pcOffset": [0, 0x100, 0x200, 0x400, 0x1000, 0x4000, 0x10000, 0x100000],
    "returnToFunctionPrologueDistance": [1, 2, 3, 4, 5, 6, 7, 8],
}


def load_case(args):
    if args.binary:
        if not args.params:
            raise SystemExit("--binary requires --params")
        wire = json.loads(Path(args.params).read_text())
        return load_image(args.binary), params_from_wire(wire)
    image, truth = generate(
        SynthSpec(
            instruction_length=32,
            call_opcode_length=6,
            ret_opcode_length=32,
            call_opcode=0x0C000000,
            ret_opcode=0x03E00008,
            function_count=16,
            noise_ratio=0.3,
            seed=args.synth_seed,
            ensure_all_called=True,
        )
    )
    return image, truth.params


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--binary", help="binary file to analyze")
    parser.add_argument("--params", help="JSON file of wire-format parameters")
    parser.add_argument("--synth-seed", type=int, default=7)
    parser.add_argument("--out", default="sweep-results", help="directory for CSV output")
    parser.add_argument(
        "--parameters",
        nargs="+",
        default=list(DEFAULT_VALUES),
        choices=list(SWEEPABLE),
        metavar="NAME",
    )
    parser.add_argument(
        "--values",
        help="comma-separated override, only with a single --parameters entry; "
        "hex allowed for pcOffset",
    )
    parser.add_argument("--top-n", type=int, default=3)
    args = parser.parse_args(argv)

    if args.values and len(args.parameters) != 1:
        raise SystemExit("--values needs exactly one --parameters entry")

    image, base_params = load_case(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)

    for parameter in args.parameters:
        if args.values:
            values = [parse_int(v.strip(), parameter) for v in args.values.split(",")]
        else:
            values = DEFAULT_VALUES[parameter]
        result = run_sweep(
            image,
            base_params,
            SweepSpec(parameter=parameter, values=values, top_n=args.top_n),
        )
        csv_path = out_dir / f"{parameter}.csv"
        csv_path.write_text(sweep_to_csv(result))

        print(f"\n{parameter}  ({csv_path})")
        for point in result.points:
            if point.error is not None:
                print(f"  {point.value:>10}  error: {point.error}")
            elif point.pairs:
                best = point.pairs[0]
                il = point.instruction_length
                print(
                    f"  {point.value:>10}  {best.score:.4f}  "
                    f"{hex_word(best.call_opcode, il)} / {hex_word(best.ret_opcode, il)}"
                )
            else:
                print(f"  {point.value:>10}  no candidates")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
