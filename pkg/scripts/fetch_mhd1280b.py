#!/usr/bin/env python3
"""Download the mhd1280b benchmark matrix (network required).

Tries the NIST Matrix Market mirror first, then the SuiteSparse collection
tarball, and stores the result as data/mhd1280b.mtx.gz where the benchmark
tier of the test suite looks for it.  Alternatively set the environment
variable RESOLVQUAD_MHD1280B to an existing .mtx/.mtx.gz file.
"""

import gzip
import io
import sys
import tarfile
import urllib.request
from pathlib import Path

NIST_URL = "https://math.nist.gov/pub/MatrixMarket2/NEP/mhd/mhd1280b.mtx.gz"
SUITESPARSE_URL = ("https://suitesparse-collection-website.herokuapp.com"
                   "/MM/Bai/mhd1280b.tar.gz")
TARGET = Path(__file__).resolve().parent.parent / "data" / "mhd1280b.mtx.gz"


def fetch(url: str) -> bytes:
    print(f"fetching {url} ...")
    with urllib.request.urlopen(url, timeout=60) as resp:
        return resp.read()


def from_nist() -> bytes:
    return fetch(NIST_URL)


def from_suitesparse() -> bytes:
    blob = fetch(SUITESPARSE_URL)
    with tarfile.open(fileobj=io.BytesIO(blob), mode="r:gz") as tar:
        for member in tar.getmembers():
            if member.name.endswith("mhd1280b.mtx"):
                data = tar.extractfile(member).read()
                return gzip.compress(data)
    raise RuntimeError("mhd1280b.mtx not found inside the tarball")


def main() -> int:
    if TARGET.exists():
        print(f"already present: {TARGET}")
        return 0
    for source in (from_nist, from_suitesparse):
        try:
            payload = source()
            break
        except Exception as exc:  # noqa: BLE001 - report and try next mirror
            print(f"  failed: {exc}")
    else:
        print("all sources failed; download the file manually and set "
              "RESOLVQUAD_MHD1280B", file=sys.stderr)
        return 1
    TARGET.parent.mkdir(parents=True, exist_ok=True)
    TARGET.write_bytes(payload)
    print(f"saved {TARGET} ({len(payload)} bytes)")
    print("sanity check: resolvquad check --matrix", TARGET)
    return 0


if __name__ == "__main__":
    sys.exit(main())
