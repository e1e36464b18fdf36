"""Persistence: system bundles (coordinate-triple matrix files plus a
key=value manifest), run manifests, and CSV result reports."""

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import ValidationError
from .system import BilinearSystem

__all__ = [
    "FORMAT_VERSION",
    "RunManifest",
    "ReportRow",
    "save_system",
    "load_system",
    "write_report",
    "REPORT_HEADER",
]

FORMAT_VERSION = "1"

REPORT_HEADER = [
    "algorithm", "r", "band_lo", "band_hi", "band_unit",
    "error_metric", "value", "iterations", "converged",
]

_MATRIX_SUFFIX = ".coo"


def _fmt(x):
    # shortest round-trip decimal
    return repr(float(x))


def _write_matrix(path, M):
    M = np.atleast_2d(np.asarray(M, dtype=float))
    rows, cols = M.shape
    lines = [f"{rows} {cols} {rows * cols}"]
    for i in range(rows):
        for j in range(cols):
            lines.append(f"{i + 1} {j + 1} {_fmt(M[i, j])}")
    path.write_text("\n".join(lines) + "\n")


def _read_matrix(path):
    if not path.exists():
        raise ValidationError(f"missing matrix file: {path}")
    lines = path.read_text().split("\n")
    header = lines[0].split()
    if len(header) != 3:
        raise ValidationError(f"{path}: header must be 'rows cols nnz'")
    rows, cols, nnz = (int(v) for v in header)
    if rows < 1 or cols < 1 or nnz < 0:
        raise ValidationError(f"{path}: invalid header {header}")
    M = np.zeros((rows, cols))
    count = 0
    for line in lines[1:]:
        line = line.strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 3:
            raise ValidationError(f"{path}: bad triple line {line!r}")
        i, j, v = int(parts[0]), int(parts[1]), float(parts[2])
        if not (1 <= i <= rows and 1 <= j <= cols):
            raise ValidationError(f"{path}: index ({i},{j}) out of range")
        if not np.isfinite(v):
            raise ValidationError(f"{path}: non-finite entry at ({i},{j})")
        M[i - 1, j - 1] = v
        count += 1
    if count != nnz:
        raise ValidationError(f"{path}: header declares {nnz} entries, found {count}")
    return M


def _write_keyvalues(path, pairs):
    path.write_text("".join(f"{k}={v}\n" for k, v in pairs))


def _read_keyvalues(path):
    if not path.exists():
        raise ValidationError(f"missing manifest: {path}")
    out = {}
    for line in path.read_text().split("\n"):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValidationError(f"{path}: malformed line {line!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def save_system(sys, path, name="system", note=""):
    """Write a system bundle (manifest + one coordinate file per matrix)."""
    path = Path(path)
    path.mkdir(parents=True, exist_ok=True)
    _write_keyvalues(path / "manifest.txt", [
        ("format_version", FORMAT_VERSION),
        ("name", name),
        ("n", sys.order),
        ("m", sys.num_inputs),
        ("p", sys.num_outputs),
        ("note", note),
    ])
    _write_matrix(path / f"A{_MATRIX_SUFFIX}", sys.A)
    for k, Nk in enumerate(sys.N, start=1):
        _write_matrix(path / f"N_{k}{_MATRIX_SUFFIX}", Nk)
    _write_matrix(path / f"B{_MATRIX_SUFFIX}", sys.B)
    _write_matrix(path / f"C{_MATRIX_SUFFIX}", sys.C)


def load_system(path):
    """Read a system bundle back into a BilinearSystem."""
    path = Path(path)
    meta = _read_keyvalues(path / "manifest.txt")
    for key in ("n", "m", "p"):
        if key not in meta:
            raise ValidationError(f"manifest missing key {key!r}")
    n, m, p = int(meta["n"]), int(meta["m"]), int(meta["p"])
    A = _read_matrix(path / f"A{_MATRIX_SUFFIX}")
    if A.shape != (n, n):
        raise ValidationError(f"A is {A.shape}, manifest says n={n}")
    N = []
    for k in range(1, m + 1):
        Nk = _read_matrix(path / f"N_{k}{_MATRIX_SUFFIX}")
        if Nk.shape != (n, n):
            raise ValidationError(f"N_{k} is {Nk.shape}, manifest says n={n}")
        N.append(Nk)
    extra = path / f"N_{m + 1}{_MATRIX_SUFFIX}"
    if extra.exists():
        raise ValidationError(f"manifest says m={m} but {extra.name} present")
    B = _read_matrix(path / f"B{_MATRIX_SUFFIX}")
    if B.shape != (n, m):
        raise ValidationError(f"B is {B.shape}, manifest says {n}x{m}")
    C = _read_matrix(path / f"C{_MATRIX_SUFFIX}")
    if C.shape != (p, n):
        raise ValidationError(f"C is {C.shape}, manifest says {p}x{n}")
    return BilinearSystem(A=A, N=tuple(N), B=B, C=C)


@dataclass(frozen=True)
class RunManifest:
    """Everything that determines a reduction run."""

    algorithm: str
    r: int
    band_kind: str = "none"  # none | time | freq
    band_lo: float = 0.0
    band_hi: float = float("inf")
    mode: str = "auto"  # auto | direct | fixed
    truncation: int = 3
    tol: float = 1e-5
    init: str = "bt"
    seed: int = 0

    def save(self, path):
        _write_keyvalues(Path(path), [
            ("format_version", FORMAT_VERSION),
            ("algorithm", self.algorithm),
            ("r", self.r),
            ("band_kind", self.band_kind),
            ("band_lo", _fmt(self.band_lo)),
            ("band_hi", _fmt(self.band_hi)),
            ("mode", self.mode),
            ("truncation", self.truncation),
            ("tol", _fmt(self.tol)),
            ("init", self.init),
            ("seed", self.seed),
        ])

    @classmethod
    def load(cls, path):
        meta = _read_keyvalues(Path(path))
        try:
            return cls(
                algorithm=meta["algorithm"],
                r=int(meta["r"]),
                band_kind=meta.get("band_kind", "none"),
                band_lo=float(meta.get("band_lo", 0.0)),
                band_hi=float(meta.get("band_hi", "inf")),
                mode=meta.get("mode", "auto"),
                truncation=int(meta.get("truncation", 3)),
                tol=float(meta.get("tol", 1e-5)),
                init=meta.get("init", "bt"),
                seed=int(meta.get("seed", 0)),
            )
        except KeyError as exc:
            raise ValidationError(f"run manifest missing key {exc}") from exc


@dataclass(frozen=True)
class ReportRow:
    algorithm: str
    r: int
    band_lo: float
    band_hi: float
    band_unit: str  # "s" | "rad/s" | ""
    error_metric: str  # "h2" | "h2tau" | "h2omega" | residual names
    value: float
    iterations: int
    converged: bool


def write_report(rows, path):
    """Write report rows as CSV with the fixed header, 12 significant
    digits, deterministic ordering (input order preserved)."""
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(REPORT_HEADER)
        for row in rows:
            writer.writerow([
                row.algorithm,
                row.r,
                f"{row.band_lo:.12g}",
                f"{row.band_hi:.12g}",
                row.band_unit,
                row.error_metric,
                f"{row.value:.12g}",
                row.iterations,
                "true" if row.converged else "false",
            ])
