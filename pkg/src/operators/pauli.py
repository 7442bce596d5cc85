"""
UCERT - Pauli strings and symmetrized operators

Pauli strings are stored in symplectic form: an X bit-vector, a Z bit-vector and a
sign. The stored operator is sign · ∏ i^(x·z) X^x Z^z, so Y is (x=1, z=1) and
every stored string is Hermitian with eigenvalues ±1. Qubits are 1-indexed in the
public API and in text labels ("+XIZ": X on qubit 1, Z on qubit 3).
"""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple, Union

import numpy as np

from ..utils.errors import ArgumentError, DimensionError

AXES = ("x", "y", "z")
AXIS_LETTER = {"x": "X", "y": "Y", "z": "Z"}
LETTER_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
BITS_LETTER = {bits: letter for letter, bits in LETTER_BITS.items()}

_SINGLE_QUBIT = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

DIRECTION_TOLERANCE = 1e-12
LEMMA1_TOLERANCE = 1e-9


def _frozen_bits(bits) -> np.ndarray:
    arr = np.asarray(bits, dtype=np.uint8).copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class PauliString:
    """
    Signed N-qubit Pauli operator in symplectic form.

    Example:
        >>> p = PauliString.from_label("-ZZX")
        >>> p.n_qubits, p.sign, p.support
        (3, -1, (1, 2, 3))
    """
    x_bits: np.ndarray
    z_bits: np.ndarray
    sign: int = 1

    def __post_init__(self):
        x = _frozen_bits(self.x_bits)
        z = _frozen_bits(self.z_bits)
        if x.ndim != 1 or x.shape != z.shape or x.size == 0:
            raise DimensionError(
                f"x_bits and z_bits must be equal-length non-empty vectors, "
                f"got shapes {x.shape} and {z.shape}"
            )
        if np.any(x > 1) or np.any(z > 1):
            raise ArgumentError("Pauli bit vectors must contain only 0/1")
        if self.sign not in (1, -1):
            raise ArgumentError(f"sign must be +1 or -1, got {self.sign}")
        object.__setattr__(self, "x_bits", x)
        object.__setattr__(self, "z_bits", z)
        object.__setattr__(self, "sign", int(self.sign))

    # -- construction -------------------------------------------------------

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse "+XIZ" / "-ZZX" / "XY" (sign defaults to +)."""
        text = label.strip()
        sign = 1
        if text[:1] in "+-":
            sign = -1 if text[0] == "-" else 1
            text = text[1:]
        if not text:
            raise ArgumentError(f"Empty Pauli label: {label!r}")
        try:
            bits = [LETTER_BITS[ch] for ch in text.upper()]
        except KeyError as e:
            raise ArgumentError(f"Invalid Pauli letter {e} in {label!r}") from None
        x, z = zip(*bits)
        return cls(np.array(x), np.array(z), sign)

    @classmethod
    def from_letters(
        cls,
        n_qubits: int,
        letters: Dict[int, str],
        sign: int = 1
    ) -> "PauliString":
        """Build from a {qubit (1-indexed): letter} map; other qubits carry I."""
        x = np.zeros(n_qubits, dtype=np.uint8)
        z = np.zeros(n_qubits, dtype=np.uint8)
        for qubit, letter in letters.items():
            if not 1 <= qubit <= n_qubits:
                raise DimensionError(f"Qubit {qubit} outside 1..{n_qubits}")
            x[qubit - 1], z[qubit - 1] = LETTER_BITS[letter.upper()]
        return cls(x, z, sign)

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        zeros = np.zeros(n_qubits, dtype=np.uint8)
        return cls(zeros, zeros)

    # -- views --------------------------------------------------------------

    @property
    def n_qubits(self) -> int:
        return int(self.x_bits.size)

    @property
    def letters(self) -> str:
        return "".join(
            BITS_LETTER[(int(x), int(z))] for x, z in zip(self.x_bits, self.z_bits)
        )

    @property
    def label(self) -> str:
        return ("+" if self.sign > 0 else "-") + self.letters

    def letter(self, qubit: int) -> str:
        return BITS_LETTER[(int(self.x_bits[qubit - 1]), int(self.z_bits[qubit - 1]))]

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(int(i) + 1 for i in np.nonzero(self.x_bits | self.z_bits)[0])

    @property
    def weight(self) -> int:
        return int(np.count_nonzero(self.x_bits | self.z_bits))

    @property
    def is_identity(self) -> bool:
        return self.weight == 0

    @property
    def symplectic(self) -> np.ndarray:
        """Row vector (x | z) of length 2N."""
        return np.concatenate([self.x_bits, self.z_bits])

    def unsigned(self) -> "PauliString":
        return self if self.sign == 1 else PauliString(self.x_bits, self.z_bits, 1)

    def negated(self) -> "PauliString":
        return PauliString(self.x_bits, self.z_bits, -self.sign)

    # -- algebra ------------------------------------------------------------

    def commutes_with(self, other: "PauliString") -> bool:
        return not anticommutes(self, other)

    def compose(self, other: "PauliString") -> "PauliString":
        """
        Product self·other of two commuting strings (the result is Hermitian).

        Raises:
            ArgumentError: if the strings anticommute (product carries ±i)
        """
        _check_same_size(self, other)
        x1, z1 = self.x_bits.astype(np.int64), self.z_bits.astype(np.int64)
        x2, z2 = other.x_bits.astype(np.int64), other.z_bits.astype(np.int64)
        x3, z3 = x1 ^ x2, z1 ^ z2
        # Z^z1 X^x2 = (-1)^(z1·x2) X^x2 Z^z1, then restore the i^(x·z) normalisation
        exponent = int((x1 @ z1) + (x2 @ z2) + 2 * (z1 @ x2) - (x3 @ z3)) % 4
        if exponent % 2:
            raise ArgumentError(
                f"{self.label} and {other.label} anticommute; product is not Hermitian"
            )
        sign = self.sign * other.sign * (-1 if exponent == 2 else 1)
        return PauliString(x3, z3, sign)

    def index_masks(self) -> Tuple[int, int]:
        """(x_mask, z_mask) over basis-state indices; qubit 1 is the most significant bit."""
        n = self.n_qubits
        x_mask = sum(1 << (n - 1 - i) for i in np.nonzero(self.x_bits)[0])
        z_mask = sum(1 << (n - 1 - i) for i in np.nonzero(self.z_bits)[0])
        return int(x_mask), int(z_mask)

    def apply(self, amplitudes: np.ndarray) -> np.ndarray:
        """
        P|ψ⟩ without building a matrix.

        (P ψ)[k ⊕ x_mask] = sign · i^|x∧z| · (-1)^|k∧z_mask| · ψ[k]
        """
        psi = np.asarray(amplitudes)
        if psi.shape != (1 << self.n_qubits,):
            raise DimensionError(
                f"{self.n_qubits}-qubit Pauli string applied to vector of shape {psi.shape}"
            )
        x_mask, z_mask = self.index_masks()
        idx = np.arange(psi.size)
        phase = self.sign * (1j ** (bin(x_mask & z_mask).count("1") % 4))
        out = np.empty(psi.shape, dtype=complex)
        out[idx ^ x_mask] = phase * bit_parity_signs(idx, z_mask) * psi
        return out

    def expectation(self, amplitudes: np.ndarray) -> float:
        """⟨ψ|P|ψ⟩ for a normalised amplitude vector."""
        psi = np.asarray(amplitudes)
        return float(np.vdot(psi, self.apply(psi)).real)

    def matrix(self) -> np.ndarray:
        """Dense 2^N x 2^N matrix (qubit 1 = most significant tensor factor)."""
        out = np.array([[complex(self.sign)]])
        for letter in self.letters:
            out = np.kron(out, _SINGLE_QUBIT[letter])
        return out

    # -- value semantics ----------------------------------------------------

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliString):
            return NotImplemented
        return (
            self.sign == other.sign
            and np.array_equal(self.x_bits, other.x_bits)
            and np.array_equal(self.z_bits, other.z_bits)
        )

    def __hash__(self) -> int:
        return hash((self.sign, self.x_bits.tobytes(), self.z_bits.tobytes()))

    def __str__(self) -> str:
        return self.label

    def __repr__(self) -> str:
        return f"PauliString('{self.label}')"


def bit_parity_signs(indices: np.ndarray, mask: int) -> np.ndarray:
    """(-1)^popcount(index & mask) for every index."""
    parity = np.zeros(np.shape(indices), dtype=np.int64)
    bit = 0
    while mask >> bit:
        if (mask >> bit) & 1:
            parity ^= (indices >> bit) & 1
        bit += 1
    return 1 - 2 * parity


def _check_same_size(p1: PauliString, p2: PauliString):
    if p1.n_qubits != p2.n_qubits:
        raise DimensionError(
            f"Pauli strings act on {p1.n_qubits} and {p2.n_qubits} qubits"
        )


def anticommutes(p1: PauliString, p2: PauliString) -> bool:
    """
    True iff the symplectic product Σ(x1·z2 + x2·z1) is odd.

    Example:
        >>> anticommutes(PauliString.from_label("XI"), PauliString.from_label("ZI"))
        True
        >>> anticommutes(PauliString.from_label("XX"), PauliString.from_label("ZZ"))
        False
    """
    _check_same_size(p1, p2)
    product = int(p1.x_bits @ p2.z_bits.astype(np.int64)) + int(p2.x_bits @ p1.z_bits.astype(np.int64))
    return bool(product % 2)


# ---------------------------------------------------------------------------
# Measurement directions
# ---------------------------------------------------------------------------

AxisPair = Tuple[str, str]
DEFAULT_AXIS_PAIR: AxisPair = ("z", "x")

_AXIS_VECTOR = {
    "x": np.array([1.0, 0.0, 0.0]),
    "y": np.array([0.0, 1.0, 0.0]),
    "z": np.array([0.0, 0.0, 1.0]),
}


def _check_axis_pair(axis_pair: Sequence[str]) -> AxisPair:
    pair = tuple(a.lower() for a in axis_pair)
    if len(pair) != 2 or pair[0] == pair[1] or any(a not in AXES for a in pair):
        raise ArgumentError(f"axis_pair must be two distinct axes from x/y/z, got {axis_pair}")
    return pair


@dataclass(frozen=True)
class MeasurementDirection:
    """
    Unit Bloch vector shared by every qubit in a uniform measurement.

    In the x–z plane the direction at angle θ is (sin θ, 0, cos θ), so the
    measured single-qubit observable is cos θ·Z + sin θ·X.
    """
    nx: float
    ny: float
    nz: float

    def __post_init__(self):
        for name in ("nx", "ny", "nz"):
            object.__setattr__(self, name, float(getattr(self, name)))
        norm_sq = self.nx ** 2 + self.ny ** 2 + self.nz ** 2
        if abs(norm_sq - 1.0) > DIRECTION_TOLERANCE:
            raise ArgumentError(
                f"Measurement direction must be a unit vector, |n|^2 = {norm_sq!r}"
            )

    @classmethod
    def from_vector(cls, vector: Sequence[float], normalize: bool = False) -> "MeasurementDirection":
        v = np.asarray(vector, dtype=float)
        if normalize:
            norm = np.linalg.norm(v)
            if norm == 0:
                raise ArgumentError("Cannot normalise the zero vector")
            v = v / norm
        return cls(*v)

    @classmethod
    def from_angle(cls, theta: float, axis_pair: Sequence[str] = DEFAULT_AXIS_PAIR) -> "MeasurementDirection":
        first, second = _check_axis_pair(axis_pair)
        v = math.cos(theta) * _AXIS_VECTOR[first] + math.sin(theta) * _AXIS_VECTOR[second]
        return cls(*v)

    @classmethod
    def along(cls, axis: str) -> "MeasurementDirection":
        return cls(*_AXIS_VECTOR[axis.lower()])

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.nx, self.ny, self.nz])

    def key(self, decimals: int = 12) -> Tuple[float, float, float]:
        """Rounded components, for caches and basis matching."""
        return tuple(round(c, decimals) + 0.0 for c in (self.nx, self.ny, self.nz))

    def matches(self, other: "MeasurementDirection", tol: float = 1e-9) -> bool:
        return bool(np.allclose(self.vector, other.vector, atol=tol, rtol=0.0))

    def observable(self) -> np.ndarray:
        """Single-qubit matrix n·σ."""
        return (
            self.nx * _SINGLE_QUBIT["X"]
            + self.ny * _SINGLE_QUBIT["Y"]
            + self.nz * _SINGLE_QUBIT["Z"]
        )

    @property
    def label(self) -> str:
        return f"({self.nx:+.6f},{self.ny:+.6f},{self.nz:+.6f})"


# ---------------------------------------------------------------------------
# Symmetrized operators E(alpha; I)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SymmetricOperatorSet:
    """
    Terms of every symmetrized operator on one support.

    terms_by_alpha[alpha] holds the C(|I|, alpha) strings with the first axis's
    letter on alpha qubits of I and the second axis's letter on the rest.
    """
    support: Tuple[int, ...]
    axis_pair: AxisPair
    terms_by_alpha: Tuple[Tuple[PauliString, ...], ...]

    def terms(self, alpha: int) -> Tuple[PauliString, ...]:
        return self.terms_by_alpha[alpha]

    @property
    def size(self) -> int:
        return len(self.support)

    def matrix(self, alpha: int) -> np.ndarray:
        """Dense sum of the alpha-sector terms."""
        return sum(p.matrix() for p in self.terms_by_alpha[alpha])


def _normalise_support(support: Iterable[int]) -> Tuple[int, ...]:
    indices = tuple(sorted(set(int(i) for i in support)))
    if not indices:
        raise ArgumentError("Support set I must be non-empty")
    if indices[0] < 1:
        raise ArgumentError(f"Qubit indices are 1-based, got {indices[0]}")
    return indices


def symmetric_operators(
    support: Iterable[int],
    axis_pair: Sequence[str] = DEFAULT_AXIS_PAIR,
    n_qubits: int = None
) -> SymmetricOperatorSet:
    """
    Enumerate the terms of E(alpha; I) for alpha = 0..|I|.

    Args:
        support: qubit set I (1-indexed)
        axis_pair: (first, second) axes; alpha counts letters of the first
        n_qubits: register size (defaults to max(I))

    Example:
        >>> ops = symmetric_operators({1, 2, 3})
        >>> sorted(p.letters for p in ops.terms(1))
        ['XXZ', 'XZX', 'ZXX']
    """
    indices = _normalise_support(support)
    first, second = _check_axis_pair(axis_pair)
    n = n_qubits if n_qubits is not None else indices[-1]
    if indices[-1] > n:
        raise ArgumentError(f"Support {indices} exceeds register of {n} qubits")

    by_alpha = []
    for alpha in range(len(indices) + 1):
        terms = []
        for chosen in itertools.combinations(indices, alpha):
            letters = {q: AXIS_LETTER[second] for q in indices}
            letters.update({q: AXIS_LETTER[first] for q in chosen})
            terms.append(PauliString.from_letters(n, letters))
        by_alpha.append(tuple(terms))

    return SymmetricOperatorSet(indices, (first, second), tuple(by_alpha))


def count_independent_operators(n_qubits: int) -> int:
    """
    Number of independent symmetric operators reachable with uniform measurements.

    Σ_{k=1}^{N} C(N,k)·C(k+2,2), which equals 2^(N-3)(N²+7N+8) - 1. The sum is
    evaluated in integers and checked against the closed form scaled by 8.
    """
    if not isinstance(n_qubits, (int, np.integer)) or n_qubits < 1:
        raise ArgumentError(f"N must be a positive integer, got {n_qubits!r}")
    n = int(n_qubits)

    total = sum(math.comb(n, k) * math.comb(k + 2, 2) for k in range(1, n + 1))
    closed_times_8 = (2 ** n) * (n * n + 7 * n + 8) - 8
    if 8 * total != closed_times_8:
        raise ArithmeticError(f"Counting identity failed at N={n}")
    return total


def count_independent_operators_closed_form(n_qubits: int) -> Fraction:
    """2^(N-3)(N²+7N+8) - 1 in exact rational arithmetic."""
    n = int(n_qubits)
    return Fraction(2) ** (n - 3) * (n * n + 7 * n + 8) - 1


def uniform_expectation_decomposition(
    support: Union[int, Iterable[int]],
    theta: float,
    axis_pair: Sequence[str] = DEFAULT_AXIS_PAIR
) -> List[Tuple[float, int]]:
    """
    Weights pairing the uniform-measurement expectation with E(alpha; I).

    ⟨∏_{i∈I}(cos θ·A_i + sin θ·B_i)⟩ = Σ_alpha cos^alpha θ · sin^(|I|-alpha) θ · E(alpha; I)

    Returns:
        [(coefficient, alpha)] for alpha = |I| down to 0
    """
    _check_axis_pair(axis_pair)
    k = support if isinstance(support, (int, np.integer)) else len(_normalise_support(support))
    if k < 1:
        raise ArgumentError("|I| must be at least 1")

    c, s = math.cos(theta), math.sin(theta)
    return [(c ** alpha * s ** (k - alpha), alpha) for alpha in range(k, -1, -1)]


def decomposition_matrix(thetas: Sequence[float], size: int) -> np.ndarray:
    """A[j, alpha] = cos^alpha θ_j · sin^(size-alpha) θ_j."""
    A = np.zeros((len(thetas), size + 1))
    for j, theta in enumerate(thetas):
        for coeff, alpha in uniform_expectation_decomposition(size, theta):
            A[j, alpha] = coeff
    return A


def theta_grid(size: int) -> List[float]:
    """θ_k = π(k + 1/2)/(|I| + 1), k = 0..|I|."""
    if size < 1:
        raise ArgumentError("|I| must be at least 1")
    return [math.pi * (k + 0.5) / (size + 1) for k in range(size + 1)]


def symmetric_expectations_from_angles(
    values: Sequence[float],
    thetas: Sequence[float],
    size: int
) -> np.ndarray:
    """
    Recover E(0..|I|; I) from uniform-measurement expectations at |I|+1 angles.

    Returns:
        Array indexed by alpha.
    """
    if len(values) != len(thetas) or len(thetas) != size + 1:
        raise DimensionError(
            f"Need exactly {size + 1} angles and values, got {len(thetas)} and {len(values)}"
        )
    A = decomposition_matrix(thetas, size)
    return np.linalg.solve(A, np.asarray(values, dtype=float))


def lemma1_bound_check(e1: float, e2: float, tol: float = LEMMA1_TOLERANCE) -> bool:
    """
    Expectations of two anticommuting Pauli strings satisfy e1² + e2² ≤ 1.

    Raises:
        ArgumentError: if either value lies outside [-1, 1] by more than tol
    """
    for value in (e1, e2):
        if not -1.0 - tol <= value <= 1.0 + tol:
            raise ArgumentError(f"Pauli expectation {value} outside [-1, 1]")
    return e1 * e1 + e2 * e2 <= 1.0 + tol
