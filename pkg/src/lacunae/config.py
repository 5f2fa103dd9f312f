"""Resource caps shared by the enumeration and compression layers."""
import os

DEFAULT_BUDGET_MB = 512

# rough cost of one basis element: the Word object plus index entry plus a few
# sparse-matrix slots and Krylov vectors
BYTES_PER_BASIS_ELEMENT = 4096


def budget_mb():
    raw = os.environ.get("LACUNAE_BUDGET_MB")
    if raw is None or raw.strip() == "":
        return DEFAULT_BUDGET_MB
    value = float(raw)
    if value <= 0:
        raise ValueError(f"LACUNAE_BUDGET_MB must be positive, got {raw!r}")
    return value


def max_basis_size(dim=1):
    """Largest ball (in words) allowed for ``dim``-dimensional coefficients."""
    return int(budget_mb() * 1024 * 1024 // (BYTES_PER_BASIS_ELEMENT * max(dim, 1)))
