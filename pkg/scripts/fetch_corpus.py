"""Fetch the reference binaries used by the corpus reproduction test.

Files land in corpus/ at the repository root. The sources are third-party
and occasionally move; any file that cannot be fetched is reported and the
corresponding test simply skips. Files already present are not re-fetched
unless --force is given.
"""

import argparse
import sys
import urllib.error
import urllib.request
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]

# filename -> (url, note). The first two feed tests/fixtures/corpus.json;
# the rest are handy for manual exploration with the CLI.
SOURCES = {
    "openvpn-mips.bin": (
        "https://github.com/darkerego/mips-binaries/raw/master/openvpn",
        "OpenVPN, big-endian MIPS build",
    ),
    "curl-aarch64.bin": (
        "https://curl.se/download/curl-8.0.1.tar.gz",
        "cURL 8.0.1; the analyzed artifact is the aarch64 ELF, not the source "
        "tarball. Build or fetch a curl 8.0.1 aarch64 binary and place it here "
        "by hand if this URL does not yield one.",
    ),
    "curl-mips.bin": (
        "https://github.com/darkerego/mips-binaries/raw/master/curl",
        "cURL, big-endian MIPS build (optional)",
    ),
    "chipquarium.ch8": (
        "https://github.com/JohnEarnest/chip8Archive/raw/master/roms/chipquarium.ch8",
        "Chip8 ROM used for call graph exploration (optional)",
    ),
}


def fetch(url: str, dest: Path, timeout: float) -> None:
    request = urllib.request.Request(url, headers={"User-Agent": "corpus-fetch"})
    with urllib.request.urlopen(request, timeout=timeout) as response:
        data = response.read()
    dest.write_bytes(data)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--dest", default=str(ROOT / "corpus"), help="target directory")
    parser.add_argument("--force", action="store_true", help="re-download existing files")
    parser.add_argument("--timeout", type=float, default=60.0)
    args = parser.parse_args(argv)

    dest = Path(args.dest)
    dest.mkdir(parents=True, exist_ok=True)
    failures = 0
    for name, (url, note) in SOURCES.items():
        target = dest / name
        if target.exists() and not args.force:
            print(f"[skip] {name} already present")
            continue
        try:
            fetch(url, target, args.timeout)
            print(f"[ok]   {name} ({target.stat().st_size} bytes) <- {url}")
        except (urllib.error.URLError, OSError) as exc:
            failures += 1
            print(f"[fail] {name}: {exc}")
            print(f"       {note}")
            print(f"       place the file manually at {target}")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
