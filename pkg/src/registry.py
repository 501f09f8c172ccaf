"""
Built-in catalog of identities.

Each entry names the two sides as expression trees (exact mode), a basis to fit
against (exact mode, fitted), or a numeric check.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import partial
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from src import numeric_oracle as oracle
from src.cfractions import CFName
from src.eisenstein import lambert, onepsione_pair
from src.errors import UnknownIdentityError
from src.expression import (CF, Const, Expr, Lambert, Monomial, Omega, Root, Series, Theta, eta,
                            poch, power, prod, q)
from src.field import SQRT5, SQRT_10M2S5, SQRT_10P2S5, SQRT_50M10S5, alpha
from src.numeric_oracle import NumericResult, Sample, a_table_value
from src.qfunctions import (BILATERAL_SUM, MonomialArg, f_minus, omega_theta_series, theta_f,
                            x20_factorization)
from src.series import QSeries, polynomial, s_mul, s_unit_inv

logger = logging.getLogger(__name__)


class Mode(Enum):
    EXACT = "exact"
    NUMERIC = "numeric"


class Expected(Enum):
    PASS = "pass"
    DOCUMENT = "document"


@dataclass(frozen=True)
class IdentitySpec:
    id: str
    description: str
    family: str
    mode: Mode = Mode.EXACT
    lhs: Optional[Expr] = None
    rhs: Optional[Expr] = None
    basis: Optional[Tuple[Expr, ...]] = None
    check: Optional[Callable[[Dict], NumericResult]] = None
    expected: Expected = Expected.PASS

    @property
    def fitted(self) -> bool:
        return self.basis is not None


REGISTRY: Dict[str, IdentitySpec] = {}


def _register(spec: IdentitySpec):
    if spec.id in REGISTRY:
        raise ValueError(f"duplicate identity id {spec.id}")
    REGISTRY[spec.id] = spec


def get_identity(identity_id: str) -> IdentitySpec:
    try:
        return REGISTRY[identity_id]
    except KeyError:
        raise UnknownIdentityError(identity_id) from None


def identity_ids() -> List[str]:
    return list(REGISTRY)


# classical

def _bilateral(a, b, label: str) -> Series:
    return Series(label, partial(theta_f, a, b, method=BILATERAL_SUM))


def _x20_side(index: int, order) -> QSeries:
    # both sides are polynomials of degree 20, exact at any order
    f = x20_factorization()[index]
    return QSeries(f.e0, f.step, f.coeffs, order)


def _mono_label(e: int) -> str:
    return "q" if e == 1 else f"q{e}"


LEMMA_PAIRS = [(1, 1), (1, 2), (5, 95), (15, 85), (25, 75), (35, 65), (45, 55)]


def _lemma_entries(a_exp: int, b_exp: int) -> List[IdentitySpec]:
    a, b = MonomialArg(1, a_exp), MonomialArg(1, b_exp)
    na, nb = MonomialArg(-1, a_exp), MonomialArg(-1, b_exp)
    ab = a * b
    tag = f"a={_mono_label(a_exp)}-b={_mono_label(b_exp)}"
    shifted = Theta(b / a, a ** 5 * b ** 3)
    even = Theta(a ** 3 * b, a * b ** 3)
    return [
        IdentitySpec(f"lemma2-f1-{tag}", f"f(a,ab^2) f(b,a^2b) = f(a,b) psi(ab) at {tag}", "classical",
                     lhs=Theta(a, a * b ** 2) * Theta(b, a ** 2 * b), rhs=Theta(a, b) * Theta(ab, ab ** 3)),
        IdentitySpec(f"lemma2-f2-{tag}", f"f(a,b) + f(-a,-b) = 2f(a^3b,ab^3) at {tag}", "classical",
                     lhs=Theta(a, b) + Theta(na, nb), rhs=2 * even),
        IdentitySpec(f"lemma2-f3-{tag}", f"f(a,b) - f(-a,-b) = 2a f(b/a,a^5b^3) at {tag}", "classical",
                     lhs=Theta(a, b) - Theta(na, nb), rhs=2 * Monomial(Fraction(a_exp)) * shifted),
        IdentitySpec(f"lemma2-f4-{tag}", f"f(-a,-b) = f(a^3b,ab^3) - a f(b/a,a^5b^3) at {tag}", "classical",
                     lhs=Theta(na, nb), rhs=even - Monomial(Fraction(a_exp)) * shifted),
    ]


def _classical():
    _register(IdentitySpec("pentagonal", "(q;q)_inf = f(-q,-q^2) as a bilateral sum", "classical",
                           lhs=poch([-1], 1), rhs=_bilateral((-1, 1), (-1, 2), "f(-q,-q^2)")))
    _register(IdentitySpec("psi-product", "psi(q) = (q^2;q^2)_inf/(q;q^2)_inf", "classical",
                           lhs=_bilateral((1, 1), (1, 3), "psi(q)"), rhs=poch([-2], 2) / poch([-1], 2)))
    for a, b in ((-3, -17), (2, 3)):
        tag = f"a={'-' if a < 0 else ''}{_mono_label(abs(a))}-b={'-' if b < 0 else ''}{_mono_label(abs(b))}"
        _register(IdentitySpec(f"jtp-{tag}", "Jacobi triple product against the bilateral sum", "classical",
                               lhs=Theta(MonomialArg.of(a), MonomialArg.of(b)),
                               rhs=_bilateral(MonomialArg.of(a), MonomialArg.of(b), f"f({a},{b}) sum")))
    for a, b in LEMMA_PAIRS:
        for spec in _lemma_entries(a, b):
            _register(spec)
    _register(IdentitySpec("x20-factorization", "(1-x)(1+x) prod_k (1 + alpha_k x + x^2) = 1 - x^20", "classical",
                           lhs=Series("(1-x^2) prod_k (1 + alpha_k x + x^2)", partial(_x20_side, 0), field_coeffs=True),
                           rhs=Series("1 - x^20", partial(_x20_side, 1))))
    _register(IdentitySpec("eq-prodK", "prod_{k=1}^{9} Omega_k(q) = q^{-3/4} eta(20tau)/eta(2tau)", "prodK",
                           lhs=prod(*(Omega(k) for k in range(1, 10))),
                           rhs=q(Fraction(-3, 4)) * eta((20, 1), (2, -1))))
    for k in range(1, 10):
        _register(IdentitySpec(f"eq-Ki-k{k}", f"Omega_{k}(q) against its theta1 series form", "ki",
                               lhs=Omega(k),
                               rhs=Series(f"theta form of Omega_{k}", partial(omega_theta_series, {k: 1}),
                                          field_coeffs=k != 5)))


# section 3 theorem

S10P = SQRT_10P2S5
S10M = SQRT_10M2S5
C_A1 = (SQRT_50M10S5 + 3 * SQRT_10M2S5) / 2

# q^{19/40} eta(4tau) psi(-q^5)/(eta(tau/5) eta(4tau/5))
P_PSI = q(Fraction(19, 40)) * eta((4, 1), (Fraction(1, 5), -1), (Fraction(4, 5), -1)) * Theta(
    MonomialArg(-1, 5), MonomialArg(-1, 15))
# q^{-3/20} eta(4tau) eta(20tau) eta^{1/8}(tau)/(eta(tau/5) eta(4tau/5) eta^{1/8}(5tau))
G_ETA = q(Fraction(-3, 20)) * eta((4, 1), (20, 1), (1, Fraction(1, 8)), (Fraction(1, 5), -1),
                                  (Fraction(4, 5), -1), (5, Fraction(-1, 8)))

SQRT_T1, SQRT_T2 = Root(CF(CFName.T1), 2), Root(CF(CFName.T2), 2)
ROOT4_S1, ROOT4_S2 = Root(CF(CFName.S1), 4), Root(CF(CFName.S2), 4)
ROOT8_R = Root(CF(CFName.R), 8)


def _inv(e: Expr) -> Expr:
    return power(e, -1)


def _inv_root(name: CFName, n: int) -> Expr:
    return power(CF(name), Fraction(-1, n))


UNITS: Dict[str, Expr] = {
    "inv": prod(_inv_root(CFName.T1, 2), _inv_root(CFName.S2, 4), _inv_root(CFName.R, 8)),
    "ts": prod(SQRT_T1, _inv_root(CFName.S2, 4), _inv_root(CFName.R, 8)),
    "t1s1": prod(SQRT_T1, ROOT4_S1, ROOT8_R),
    "s1t2": prod(ROOT4_S1, ROOT8_R, _inv_root(CFName.T2, 2)),
    "t1s2": prod(SQRT_T1, ROOT4_S2, ROOT8_R),
    "t2s1": prod(SQRT_T2, ROOT4_S1, ROOT8_R),
}

THEOREM_BASIS: Tuple[Expr, ...] = (P_PSI, G_ETA * UNITS["inv"], G_ETA * UNITS["ts"],
                                   G_ETA * UNITS["t2s1"], G_ETA * UNITS["s1t2"])


def _omega_combo(coeffs: Sequence[Tuple[int, object]], with_product: bool = True) -> Expr:
    combo = None
    for k, c in coeffs:
        term = c * Omega(k, Fraction(1, 5))
        combo = term if combo is None else combo + term
    if not with_product:
        return combo
    rest = prod(*(Omega(k, Fraction(1, 5)) for k in range(1, 10) if k != 5))
    return combo * rest


# printed right sides; `u` may swap units for the variant readings
def _rhs_o1_o9(u):
    return -S10P * P_PSI + G_ETA * (S10P * u["inv"] + C_A1 * (u["ts"] - u["t1s1"]))


def _rhs_o3_o7(u):
    c = S10P * (SQRT5 - 1) / 2
    d = S10M * (SQRT5 - 1) / 2
    return c * P_PSI - G_ETA * (c * u["inv"] + d * (u["t1s1"] - u["ts"]))


def _rhs_1o1p9o9(u):
    return -2 * P_PSI + G_ETA * (2 * u["s1t2"] + 2 * (SQRT5 + 1) * u["ts"] + (3 + SQRT5) * (u["inv"] - u["t1s1"]))


def _rhs_7o7p3o3(u, sign=1):
    return -2 * P_PSI + G_ETA * (2 * u["s1t2"] - 2 * (SQRT5 - 1) * u["ts"]
                                 + sign * (SQRT5 - 3) * (u["t1s1"] - u["inv"]))


def _rhs_7o7m3o3(u):
    c = S10M - S10P
    return c * P_PSI + G_ETA * (S10M * (u["s1t2"] - u["ts"]) + c * u["t1s1"])


def _rhs_o99p_o11(u):
    return -(5 + SQRT5) * P_PSI + G_ETA * ((5 + 3 * SQRT5) * (u["ts"] - u["t1s1"]) + (5 + SQRT5) * u["inv"])


def _rhs_o99m_o11(u):
    c = S10M + 2 * S10P
    return c * P_PSI + G_ETA * (S10P * (u["s1t2"] - u["inv"]) - c * u["ts"] + (2 * S10M + 2 * S10P) * u["t1s2"])


def _rhs_o77p_o33(u):
    return -(5 - SQRT5) * P_PSI + G_ETA * ((3 * SQRT5 - 5) * (u["t1s1"] - u["ts"]) + (5 - SQRT5) * u["inv"])


def _rhs_o77m_o33(u):
    c = 2 * S10M - S10P
    return c * P_PSI + G_ETA * (S10M * (u["s1t2"] - u["inv"]) - c * u["ts"] + (2 * S10M - 2 * S10P) * u["t1s2"])


def _rhs_zero(u):
    return Const(0)


A1, A3, A7, A9 = alpha(1), alpha(3), alpha(7), alpha(9)

# id suffix, left-side Omega coefficients, printed right side
THEOREMS = [
    ("O1-O9", [(1, 1), (9, -1)], _rhs_o1_o9),
    ("O3-O7", [(3, 1), (7, -1)], _rhs_o3_o7),
    ("1O1+9O9", [(9, 1 + A9), (1, 1 + A1)], _rhs_1o1p9o9),
    ("zero", [(9, 1 + A9), (1, -(1 + A1))], _rhs_zero),
    ("7O7+3O3", [(7, 1 + A7), (3, 1 + A3)], _rhs_7o7p3o3),
    ("7O7-3O3", [(7, 1 + A7), (3, -(1 + A3))], _rhs_7o7m3o3),
    ("O99+O11", [(9, A9), (1, A1)], _rhs_o99p_o11),
    ("O99-O11", [(9, A9), (1, -A1)], _rhs_o99m_o11),
    ("O77+O33", [(7, A7), (3, A3)], _rhs_o77p_o33),
    ("O77-O33", [(7, A7), (3, -A3)], _rhs_o77m_o33),
]

T2_UNITS = dict(UNITS, t1s1=UNITS["t2s1"], t1s2=UNITS["t2s1"])
S1_UNITS = dict(UNITS, t1s2=UNITS["t1s1"])


def _a_series(i: int, order) -> QSeries:
    """(1/(q;q)_inf) sum_n (-1)^n A_i(n) q^{n(n+1)/2} from the tabulated A-values."""
    terms = {}
    n = 0
    while n * (n + 1) // 2 < order:
        c = a_table_value(i, n)
        terms[n * (n + 1) // 2] = c if n % 2 == 0 else -c
        n += 1
    return s_mul(polynomial(terms, order), s_unit_inv(f_minus(1, order)))


def _theorem():
    for suffix, coeffs, rhs in THEOREMS:
        lhs = _omega_combo(coeffs)
        _register(IdentitySpec(f"thm3-{suffix}", f"Omega combination {suffix} as printed", "theorem3",
                               lhs=lhs, rhs=rhs(UNITS)))
    for suffix, coeffs, rhs in THEOREMS:
        if suffix == "zero":
            continue
        _register(IdentitySpec(f"thm3-{suffix}-t2", f"{suffix} with sqrt(T2) 4th-root(S1) 8th-root(R) in place "
                               "of the off-lattice unit", "theorem3", lhs=_omega_combo(coeffs),
                               rhs=rhs(T2_UNITS), expected=Expected.DOCUMENT))
    for suffix, coeffs, _ in THEOREMS:
        _register(IdentitySpec(f"thm3-{suffix}-fitted", f"{suffix} against the fitted five-term combination",
                               "theorem3", lhs=_omega_combo(coeffs), basis=THEOREM_BASIS))
    by_suffix = {s: (c, r) for s, c, r in THEOREMS}
    _register(IdentitySpec("thm3-O1-O9-derived", "O1-O9 with the sign and unit corrections", "theorem3",
                           lhs=_omega_combo(by_suffix["O1-O9"][0]),
                           rhs=S10P * P_PSI - G_ETA * (S10P * UNITS["inv"] + C_A1 * (UNITS["ts"] - UNITS["t2s1"])),
                           expected=Expected.DOCUMENT))
    for suffix in ("O99-O11", "O77-O33"):
        coeffs, rhs = by_suffix[suffix]
        _register(IdentitySpec(f"thm3-{suffix}-s1", f"{suffix} reading the last unit with 4th-root(S1)",
                               "theorem3", lhs=_omega_combo(coeffs), rhs=rhs(S1_UNITS), expected=Expected.DOCUMENT))
    coeffs, _ = by_suffix["7O7+3O3"]
    _register(IdentitySpec("thm3-7O7+3O3-minus", "7O7+3O3 with a minus before the (sqrt5-3) term", "theorem3",
                           lhs=_omega_combo(coeffs), rhs=_rhs_7o7p3o3(UNITS, sign=-1), expected=Expected.DOCUMENT))
    coeffs, rhs = by_suffix["O1-O9"]
    _register(IdentitySpec("thm3-O1-O9-single", "O1-O9 without the product factor on the left", "theorem3",
                           lhs=_omega_combo(coeffs, with_product=False), rhs=rhs(UNITS), expected=Expected.DOCUMENT))
    a_combos = {
        1: [(1, 1), (9, -1)],
        2: [(9, 1 + A9), (1, 1 + A1)],
        3: [(9, A9), (1, -A1)],
    }
    for i, coeffs in a_combos.items():
        lhs = None
        for k, c in coeffs:
            term = c * Omega(k)
            lhs = term if lhs is None else lhs + term
        _register(IdentitySpec(f"thm3-A{i}-series", f"Omega combination against the tabulated A{i} values", "ki",
                               lhs=lhs, rhs=Series(f"A{i} theta series", partial(_a_series, i), field_coeffs=True)))


# Lambert series

def _eta_40_20() -> Expr:
    return eta((40, 4), (20, -2))


def _onepsione_side(z_exp: int, side: int, order) -> QSeries:
    return onepsione_pair(20, z_exp, 40, order)[side]


def _eisenstein():
    for name, terms, cf_name in (("E1", [(1, 3), (1, 7), (-1, 13), (-1, 17)], CFName.T1),
                                 ("E2", [(1, 1), (1, 9), (-1, 11), (-1, 19)], CFName.T2)):
        t = CF(cf_name, Fraction(2))
        _register(IdentitySpec(f"eis-{name}", f"odd-n Lambert series = eta^4(40tau)/eta^2(20tau) "
                               f"[1/{cf_name.value}(q^2) + {cf_name.value}(q^2)]", "eisenstein",
                               lhs=Lambert(lambert(20, terms, parity="odd")), rhs=_eta_40_20() * (_inv(t) + t)))
    base40 = 40
    rhs = poch([-40], base40) ** 2 / poch([-20], base40) ** 2 * (
        Monomial(Fraction(3)) * poch([-14, -26], base40) / poch([-6, -34], base40)
        + Monomial(Fraction(7)) * poch([-6, -34], base40) / poch([-14, -26], base40))
    _register(IdentitySpec("eis-E1-pochhammer", "odd-n Lambert series of E1 against its Pochhammer form",
                           "eisenstein", lhs=Lambert(lambert(20, [(1, 3), (1, 7), (-1, 13), (-1, 17)], parity="odd")),
                           rhs=rhs))
    for z in (6, 14):
        _register(IdentitySpec(f"onepsione-z{z}", f"1psi1 summation at a=q^20, z=q^{z}, q -> q^40", "eisenstein",
                               lhs=Series(f"1psi1 sum z={z}", partial(_onepsione_side, z, 0)),
                               rhs=Series(f"1psi1 product z={z}", partial(_onepsione_side, z, 1))))

    p20 = poch([-20], 20)
    p10 = poch([-10], 10)
    p60 = poch([-60], 60)
    _register(IdentitySpec("eis-Es3", "sum n(q^n-q^9n-q^11n+q^19n)/(1-q^20n) as a product", "eisenstein",
                           lhs=Lambert(lambert(20, [(1, 1), (-1, 9), (-1, 11), (1, 19)], weight="n")),
                           rhs=q(1) * p20 ** 2 * p10 ** 2 * poch([-8, -12], 20) / poch([-1, -9, -11, -19], 20) ** 2))
    _register(IdentitySpec("eis-Es4", "sum n(q^3n-q^7n-q^13n+q^17n)/(1-q^20n) as a product", "eisenstein",
                           lhs=Lambert(lambert(20, [(1, 3), (-1, 7), (-1, 13), (1, 17)], weight="n")),
                           rhs=q(3) * p20 ** 2 * p10 ** 2 * poch([-4, -16], 20) / poch([-3, -7, -13, -17], 20) ** 2))
    _register(IdentitySpec("eis-Es5", "sum (n/3)(q^n-q^9n-q^11n+q^19n)/(1-q^20n) as a product", "eisenstein",
                           lhs=Lambert(lambert(20, [(1, 1), (-1, 9), (-1, 11), (1, 19)], weight="legendre3")),
                           rhs=q(1) * p10 ** 2 * p60 * poch([-1, -8, -9, -11, -12, -19], 20)
                           / (p20 * poch([-3, -27, -33, -57], 60))))
    _register(IdentitySpec("eis-Es6", "sum (n/3)(q^3n-q^7n-q^13n+q^17n)/(1-q^20n) as a product", "eisenstein",
                           lhs=Lambert(lambert(20, [(1, 3), (-1, 7), (-1, 13), (1, 17)], weight="legendre3")),
                           rhs=q(3) * p10 ** 2 * p60 * poch([-3, -4, -7, -13, -16, -17], 20)
                           / (p20 * poch([-9, -21, -39, -51], 60))))


# numeric

def _samples(cfg: Dict) -> List[Sample]:
    digits = cfg["precision_digits"]
    return [Sample(float(qv), float(z), digits) for qv, z in cfg["samples"]]


def _num_prodsine(cfg):
    return oracle.sine_product_check(cfg["precision_digits"])


def _num_tm(cfg):
    return oracle.tm_check(cfg["tm_q"], cfg["precision_digits"])


def _num_tk(cfg):
    return oracle.tk_check(cfg["tm_q"], cfg["precision_digits"])


def _num_atable(i, cfg):
    return oracle.a_table_check(i, tuple(cfg["atable_range"]), cfg["precision_digits"], tol="1e-25")


def _num_es(which, cfg):
    return oracle.es_lemma_check(which, _samples(cfg), tol="1e-20")


def _num_theta1_forms(cfg):
    return oracle.theta1_forms_check(
        oracle.random_samples(cfg["theta1_random_samples"], cfg["seed"], cfg["precision_digits"]))


def _num_theta1_prime(cfg):
    return oracle.theta1_prime_check(digits=cfg["precision_digits"])


def _num_liu(cfg):
    return oracle.liu_check(_samples(cfg))


def _num_cf(name, cfg):
    cf_cfg = cfg["cf"]
    return oracle.cf_display_check(name, cf_cfg["points"], cf_cfg["depth"], cf_cfg["series_order"],
                                   cfg["precision_digits"], cf_cfg["tolerance"])


def _numeric():
    entries = [
        ("num-prodsine", "prod_k sin(k pi/20) = sqrt(10)/512", _num_prodsine),
        ("num-tm", "prod_k theta1(k pi/20) as an eta quotient", _num_tm),
        ("num-tk", "theta1(k pi/20) = 2q^{1/12} eta sin(k pi/20) Omega_k", _num_tk),
    ]
    entries += [(f"num-atable-A{i}", f"A{i}(n) sine ratios against the table", partial(_num_atable, i))
                for i in (1, 2, 3)]
    entries += [
        ("num-es1", "Lambert-sine sum against its theta1 quotient (residues 1, 9, 11, 19)", partial(_num_es, "es1")),
        ("num-es2", "Lambert-sine sum against its theta1 quotient (residues 3, 7, 13, 17)", partial(_num_es, "es2")),
        ("num-theta1-product", "theta1 sine series against the product form", _num_theta1_forms),
        ("num-theta1-prime", "theta1'(0) = 2q^{1/8}(q;q)^3", _num_theta1_prime),
        ("num-liu", "theta1(pi/3 - z) theta1(pi/3 + z) as a theta1 quotient", _num_liu),
    ]
    entries += [(f"num-cf-{name.value}", f"{name.value} displayed fraction against its series",
                 partial(_num_cf, name)) for name in CFName]
    for identity_id, description, check in entries:
        _register(IdentitySpec(identity_id, description, "numeric", mode=Mode.NUMERIC, check=check))


_classical()
_theorem()
_eisenstein()
_numeric()
logger.debug("registry holds %d identities", len(REGISTRY))
