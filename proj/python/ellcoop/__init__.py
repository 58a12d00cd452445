"""Koszul, Steenrod and rational-model computations for the cooperations of the Adams summand."""

import json

from ._ellcoop import (
    InfeasibleError,
    command_names,
    normalize_rational,
    reduce_mod_p,
    unit_power_congruence,
)
from . import _ellcoop

__all__ = [
    "InfeasibleError",
    "command_names",
    "run",
    "hazewinkel",
    "eta_r",
    "ell_image",
    "tor_table",
    "tor_table_csv",
    "delta",
    "bockstein",
    "steenrod_q",
    "torsion_basis",
    "congruence",
    "crosscheck",
    "valuation",
    "normalize_rational",
    "reduce_mod_p",
    "power_congruence",
    "unit_power_congruence",
]


def run(command, **options):
    """Run a command by name and return its report as a dict.

    The dict carries an extra key "ok", false when a checked assertion failed.
    """
    text, ok = _ellcoop.run(command, **options)
    report = json.loads(text)
    report["ok"] = ok
    return report


def hazewinkel(p=3, n=2):
    return run("hazewinkel", p=p, n=n)


def eta_r(p=3, n=2):
    return run("eta-r", p=p, n=n)


def ell_image(p=3, n=2):
    return run("ell-image", p=p, n=n)


def tor_table(p=3, case="ell", max_degree=64, threads=1, slice_limit=200000):
    return run("tor-table", p=p, case=case, max_degree=max_degree, threads=threads, slice_limit=slice_limit)


def tor_table_csv(p=3, case="ell", max_degree=64, threads=1, slice_limit=200000):
    return _ellcoop.tor_table_csv(p=p, case=case, max_degree=max_degree, threads=threads, slice_limit=slice_limit)


def delta(indices, other=(), p=3, case="synthetic"):
    return run("delta", p=p, case=case, indices=list(indices), other=list(other))


def bockstein(p=3, case="synthetic", max_degree=24, r_max=3, threads=1, slice_limit=200000):
    return run("bockstein", p=p, case=case, max_degree=max_degree, r_max=r_max, threads=threads,
               slice_limit=slice_limit)


def steenrod_q(indices, p=3):
    return run("steenrod-q", p=p, indices=list(indices))


def torsion_basis(p=3, max_degree=80, threads=1):
    return run("torsion-basis", p=p, max_degree=max_degree, threads=threads)


def congruence(p=3, n=2):
    return run("congruence", p=p, n=n)


def crosscheck(p=3, max_degree=80, threads=1):
    return run("crosscheck", p=p, max_degree=max_degree, threads=threads)


def valuation(q, p):
    """p-adic valuation of an int, fractions.Fraction or decimal string; None for zero."""
    return _ellcoop.valuation(str(q), p)


def power_congruence(z, x, y, t, p, k):
    """Whether z^(p^k) == p^(p^k) x^(p^k) + t^(p^k) y^(p^k) mod p^(k+1) t, given z == px + ty mod pt."""
    return _ellcoop.power_congruence(str(z), str(x), str(y), str(t), p, k)
