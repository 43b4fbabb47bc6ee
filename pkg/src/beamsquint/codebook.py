"""Codebook container, the DFT baseline, and the text file format.

File format: a header line ``# n_antennas=N codebook_size=L architecture=A
epsilon=E`` followed by one line per beam, entries written as ``re:im``
pairs separated by spaces. Beam rows run over signed indices
``-L/2, ..., -1, 1, ..., L/2``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import SystemConfig, beam_gain

ARCHITECTURES = ("unconstrained", "analog", "hybrid2rf")


def signed_indices(codebook_size: int) -> np.ndarray:
    half = codebook_size // 2
    return np.concatenate([np.arange(-half, 0), np.arange(1, half + 1)])


@dataclass(frozen=True, eq=False)
class Codebook:
    """`L` beamformers, rows ordered by signed beam index.

    For ``hybrid2rf`` codebooks, ``analog`` holds the per-beam
    ``N_t x 2`` phase-only matrices and ``digital`` the 2-vectors with
    ``analog[r] @ digital[r] == vectors[r]``.
    """

    vectors: np.ndarray
    architecture: str = "unconstrained"
    epsilon: float = 0.0
    analog: np.ndarray | None = None
    digital: np.ndarray | None = None

    def __post_init__(self):
        if self.architecture not in ARCHITECTURES:
            raise ValueError(f"unknown architecture {self.architecture!r}")
        if self.vectors.ndim != 2 or self.vectors.shape[0] % 2:
            raise ValueError("vectors must be an (L, N_t) array with even L")

    def __len__(self):
        return self.vectors.shape[0]

    @property
    def size(self) -> int:
        return self.vectors.shape[0]

    @property
    def n_antennas(self) -> int:
        return self.vectors.shape[1]

    @property
    def indices(self) -> np.ndarray:
        return signed_indices(self.size)

    def row(self, i: int) -> int:
        half = self.size // 2
        if i == 0 or abs(i) > half:
            raise IndexError(f"beam index {i} outside +-1..{half}")
        return i + half if i < 0 else i + half - 1

    def vector(self, i: int) -> np.ndarray:
        return self.vectors[self.row(i)]

    def gain(self, i: int, varphi):
        return beam_gain(self.vector(i), varphi)


def mirror(positive: np.ndarray) -> np.ndarray:
    """Stack conjugated beams for ``-L/2..-1`` ahead of the positive beams ``1..L/2``."""
    positive = np.asarray(positive, dtype=complex)
    return np.vstack([np.conj(positive[::-1]), positive])


def dft_codebook(cfg: SystemConfig) -> Codebook:
    """Steering-vector beams pointed at the nominal beam centers ``(2i-1)/L``."""
    if cfg.codebook_size > 4096:
        raise ValueError("codebook_size above 4096 is not supported")
    L, n = cfg.codebook_size, cfg.n_antennas
    centers = (2 * np.arange(1, cfg.half_size + 1) - 1) / L
    positive = np.exp(1j * np.pi * np.outer(centers, np.arange(n))) / np.sqrt(n)
    return Codebook(mirror(positive), "analog", cfg.squint_factor)


def _fmt(x: float) -> str:
    return format(x, ".17g")


def write_codebook(path, codebook: Codebook) -> None:
    lines = [f"# n_antennas={codebook.n_antennas} codebook_size={codebook.size} "
             f"architecture={codebook.architecture} epsilon={_fmt(codebook.epsilon)}"]
    for w in codebook.vectors:
        lines.append(" ".join(f"{_fmt(z.real)}:{_fmt(z.imag)}" for z in w))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_codebook(path) -> Codebook:
    """Parse a codebook file; hybrid factors are recomputed from the vectors."""
    with open(path) as fh:
        header = fh.readline().strip()
        if not header.startswith("#"):
            raise ValueError(f"{path}: missing header line")
        meta = dict(tok.split("=", 1) for tok in header[1:].split())
        try:
            n = int(meta["n_antennas"])
            size = int(meta["codebook_size"])
            arch = meta["architecture"]
            eps = float(meta["epsilon"])
        except KeyError as exc:
            raise ValueError(f"{path}: header lacks {exc.args[0]}") from None
        rows = []
        for line in fh:
            if not line.strip():
                continue
            pairs = [tok.split(":") for tok in line.split()]
            rows.append([complex(float(re), float(im)) for re, im in pairs])
    vectors = np.array(rows, dtype=complex)
    if vectors.shape != (size, n):
        raise ValueError(f"{path}: expected {size} beams of length {n}, got {vectors.shape}")
    if arch == "hybrid2rf":
        from .design import hybrid_decompose

        parts = [hybrid_decompose(w) for w in vectors]
        return Codebook(vectors, arch, eps,
                        np.array([p[0] for p in parts]), np.array([p[1] for p in parts]))
    return Codebook(vectors, arch, eps)
