"""Invariant suites behind ``posetlab verify``."""

from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass, field

from . import ln
from .complex import euler_characteristic, nerve
from .incidence import mobius_by_inversion
from .layered import double, double_property_M, mobius_double, property_M_maps
from .poset import find_isomorphism, greatest_lower_bound, interval, least_upper_bound, verify_isomorphism
from .surgery import connect_sum, mobius_conn_sum, mobius_cross_closed_form, random_surgery_instance, satisfies_M

SUITES = ("mobius", "lattice", "surgery", "double", "topology")


@dataclass
class VerificationReport:
    suite: str
    cases: int = 0
    failures: list[dict] = field(default_factory=list)
    elapsed_ms: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, **details) -> None:
        self.failures.append({key: str(value) if not isinstance(value, (int, bool)) else value for key, value in details.items()})

    def to_dict(self) -> dict:
        return asdict(self)


def _mobius(report: VerificationReport, max_n: int, seed: int) -> None:
    for n in range(1, min(max_n, ln.DEFAULT_CAP) + 1):
        inv = mobius_by_inversion(ln.build_ln(n))
        elems = ln.elements(n)
        for S in elems:
            for T in elems:
                report.cases += 1
                want = inv[S.bits, T.bits]
                closed, rec = ln.mobius_closed(S, T), ln.mobius_recursive(S, T)
                if not want == closed == rec:
                    report.fail(n=n, S=S, T=T, inversion=want, closed=closed, recursive=rec)


def _lattice(report: VerificationReport, max_n: int, seed: int) -> None:
    for n in range(1, min(max_n, ln.DEFAULT_CAP) + 1):
        P = ln.build_ln(n)
        elems = ln.elements(n)
        full = ln.LnElement(n, (1 << n) - 1)
        empty = ln.LnElement(n, 0)
        for S in elems:
            comp = ln.sigma(S)
            if ln.sigma(comp) != S:
                report.fail(n=n, S=S, law="sigma involution")
            for T in elems:
                report.cases += 1
                j, m = ln.join(S, T), ln.meet(S, T)
                if j.bits != least_upper_bound(P, S.bits, T.bits) or m.bits != greatest_lower_bound(P, S.bits, T.bits):
                    report.fail(n=n, S=S, T=T, law="bounds", join=j, meet=m)
                if j != ln.join_by_maxima(S, T) or m != ln.meet_by_minima(S, T):
                    report.fail(n=n, S=S, T=T, law="max/min form")
                if ln.rho(j) + ln.rho(m) != ln.rho(S) + ln.rho(T):
                    report.fail(n=n, S=S, T=T, law="modular")
                if ln.leq(S, T) != ln.leq(ln.sigma(T), comp):
                    report.fail(n=n, S=S, T=T, law="sigma reverses order")
                if j == full and m == empty and T != comp:
                    report.fail(n=n, S=S, T=T, law="unique complement")


def _surgery(report: VerificationReport, max_n: int, seed: int, instances: int = 200) -> None:
    rng = random.Random(seed)
    for i in range(instances):
        P0, P1, E = random_surgery_instance(rng)
        report.cases += 1
        P, _ = connect_sum(P0, P1, E)
        brute = mobius_by_inversion(P)
        if mobius_conn_sum(P0, P1, E) != brute:
            report.fail(instance=i, check="connect-sum block formula")
        if satisfies_M(P0, P1, E):
            if mobius_cross_closed_form(P0, P1, E) != brute:
                report.fail(instance=i, check="closed cross form")
            allowed = {0} | mobius_by_inversion(P0).value_range() | mobius_by_inversion(P1).value_range()
            allowed |= {-v for v in mobius_by_inversion(E.Q).value_range()}
            if not brute.value_range() <= allowed:
                report.fail(instance=i, check="signed range containment")


def _double(report: VerificationReport, max_n: int, seed: int) -> None:
    for n in range(1, min(max_n, ln.DEFAULT_CAP - 1) + 1):
        P = ln.build_ln(n)
        layer = ln.natural_layer(n)
        D, _ = double(P, layer)
        target = ln.build_ln(n + 1)
        report.cases += 1
        if not verify_isomorphism(D, target, list(range(D.size))):
            report.fail(n=n, check="psi is an isomorphism")
        found = find_isomorphism(D, target)
        if found is None or not verify_isomorphism(D, target, found):
            report.fail(n=n, check="isomorphism search")
        maps = property_M_maps(P, layer)
        lifted = double_property_M(P, layer, maps)
        if lifted != property_M_maps(target, ln.natural_layer(n + 1)):
            report.fail(n=n, check="associated maps of the double")
        mu_hat = mobius_double(P, layer)
        for S in ln.elements(n + 1):
            for T in ln.elements(n + 1):
                report.cases += 1
                if mu_hat[S.bits, T.bits] != ln.mobius_closed(S, T):
                    report.fail(n=n, S=S, T=T, check="Möbius of the double")


def _topology(report: VerificationReport, max_n: int, seed: int, max_interval: int = 20) -> None:
    for n in range(1, min(max_n, ln.DEFAULT_CAP) + 1):
        P = ln.build_ln(n)
        mu = mobius_by_inversion(P)
        for I in ln.elements(n):
            for J in ln.elements(n):
                if I == J or not P.leq[I.bits, J.bits]:
                    continue
                sub, _ = interval(P, I.bits, J.bits, open=True)
                if sub.size > max_interval:
                    continue
                report.cases += 1
                chi = euler_characteristic(nerve(sub))
                value = mu[I.bits, J.bits]
                if chi != 1 + value:
                    report.fail(n=n, I=I, J=J, check="hall", chi=chi, mu=value)
                d = ln.rho(J) - ln.rho(I)
                if not ln.is_elementary(I, J):
                    if chi != 1:
                        report.fail(n=n, I=I, J=J, check="contractible interval", chi=chi)
                    continue
                if d >= 2 and chi != 1 + (-1) ** d:
                    report.fail(n=n, I=I, J=J, check="sphere", chi=chi)
                try:
                    ln.boole_interval_iso(I, J)
                except AssertionError as exc:
                    report.fail(n=n, I=I, J=J, check="boolean interval", error=exc)


_RUNNERS = {"mobius": _mobius, "lattice": _lattice, "surgery": _surgery, "double": _double, "topology": _topology}


def run_suite(name: str, max_n: int = 6, seed: int = 0) -> VerificationReport:
    report = VerificationReport(name)
    start = time.perf_counter()
    _RUNNERS[name](report, max_n, seed)
    report.elapsed_ms = int(round((time.perf_counter() - start) * 1000))
    return report


def run(suite: str, max_n: int = 6, seed: int = 0) -> VerificationReport:
    """Run one suite, or all of them merged in suite-name order for ``suite='all'``."""
    if suite != "all":
        return run_suite(suite, max_n, seed)
    merged = VerificationReport("all")
    for name in sorted(SUITES):
        part = run_suite(name, max_n, seed)
        merged.cases += part.cases
        merged.failures.extend({"suite": name, **f} for f in part.failures)
        merged.elapsed_ms += part.elapsed_ms
    return merged
