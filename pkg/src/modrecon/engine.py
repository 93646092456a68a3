"""Fault-tolerant modular reconstruction driver.

The loop: run a worker modulo each prime of a set P, keep the primes whose
result carries the most common signature, CRT-lift the coefficients of
those results, recover rationals with error-tolerant reconstruction, check
the candidate against a fresh prime, verify it, and on any failure double P
and go again.

A worker is anything implementing :class:`ModularWorker`.  Results are
exposed to the engine only as a discrete signature plus a mapping
``generator key -> position -> residue``, which lets a Groebner basis
worker and a plain rational-vector worker share the whole pipeline.
"""
from __future__ import annotations

import enum
import logging
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Any, Callable, Hashable, Iterable, Mapping, Sequence

from .arith import Residue, mod_inverse, prime_stream
from .errors import (
    LiftFailed,
    NoUsableRuns,
    RoundLimitExceeded,
    WorkerFailure,
    WorkerNeverApplicable,
)
from .groebner import (
    buchberger,
    format_signature,
    is_groebner_basis,
    lead_signature,
    normal_form,
    sort_basis,
)
from .poly import Polynomial, format_ideal, primitive_integer_terms, reduce_mod_p
from .reconstruct import error_tolerant

log = logging.getLogger(__name__)

__all__ = [
    "RunStatus",
    "ModularRun",
    "ModularWorker",
    "GroebnerWorker",
    "RationalVectorWorker",
    "VoteOutcome",
    "FaultPlan",
    "FaultyWorker",
    "ModularOptions",
    "RunReport",
    "ModularOutcome",
    "run_one",
    "majority_vote",
    "LiftState",
    "lift_and_reconstruct",
    "verify_gb",
    "inject_faults",
    "run_modular",
    "modular_groebner",
]

Coefficients = dict[Hashable, dict[Hashable, int]]


class RunStatus(str, enum.Enum):
    OK = "ok"
    INAPPLICABLE = "inapplicable"  # type 1
    FAILED = "failed"              # type 2, or a rejected known invariant (type 3)
    DONE = "done"                  # ok and merged into the accepted lift


@dataclass(frozen=True)
class ModularRun:
    prime: int
    status: RunStatus
    result: Any = None
    signature: Any = None
    invariant: Any = None
    reason: str = ""

    def __post_init__(self):
        usable = self.status in (RunStatus.OK, RunStatus.DONE)
        if usable != (self.result is not None):
            raise ValueError("result must be present exactly for ok/done runs")


class ModularWorker:
    """Deterministic computation modulo a prime, plus the hooks the engine needs.

    Subclasses implement :meth:`compute`, :meth:`signature`,
    :meth:`coefficients`, :meth:`assemble` and :meth:`reduce`; the rest have
    usable defaults.
    """

    #: known value of the invariant returned by :meth:`invariant`, if any
    expected_invariant: Any = None

    def applicable(self, p: int) -> bool:
        return True

    def compute(self, p: int) -> Any:
        raise NotImplementedError

    def signature(self, result) -> Hashable:
        raise NotImplementedError

    def coefficients(self, result) -> Coefficients:
        raise NotImplementedError

    def assemble(self, coeffs: Mapping[Hashable, Mapping[Hashable, Fraction]]) -> Any:
        raise NotImplementedError

    def reduce(self, value, p: int) -> Any:
        """Image of a rational result modulo p, or None if it has no image."""
        raise NotImplementedError

    def verify(self, value) -> bool:
        return True

    def invariant(self, result, p: int) -> Any:
        return None

    def format_signature(self, sig) -> str:
        return repr(sig)

    def format_result(self, value) -> str:
        return repr(value)

    def perturb_signature(self, result, p: int) -> Any:
        raise NotImplementedError

    def perturb_coefficient(self, result, p: int) -> Any:
        raise NotImplementedError


class GroebnerWorker(ModularWorker):
    """Reduced Groebner basis of an ideal over Q, computed modulo p."""

    def __init__(self, F: Iterable[Polynomial]):
        self.F = [f for f in F if f]
        self.ring = self.F[0].ring if self.F else None
        self._leads = [primitive_integer_terms(f)[0][1] for f in self.F]

    def applicable(self, p):
        # a prime dividing an input lead coefficient changes the input's lead ideal
        return all(lc % p for lc in self._leads)

    def compute(self, p):
        return buchberger(reduce_mod_p(f, p).poly for f in self.F)

    def signature(self, G):
        return lead_signature(G)

    def coefficients(self, G):
        return {g.lm: dict(g.terms) for g in G}

    def assemble(self, coeffs):
        return sort_basis(Polynomial.from_dict(self.ring, dict(c)) for c in coeffs.values())

    def reduce(self, U, p):
        ring = self.ring.with_modulus(p)
        out = []
        for g in U:
            if any(c.denominator % p == 0 for _, c in g.terms):
                return None
            out.append(Polynomial.from_dict(ring, {m: ring.coerce(c) for m, c in g.terms}))
        return out

    def verify(self, U):
        return verify_gb(self.F, U)

    def format_signature(self, sig):
        if self.ring is None:
            return "[]"
        return format_signature(sig, self.ring)

    def format_result(self, U):
        return format_ideal(self.ring, U)

    def perturb_signature(self, G, p):
        # drop the generator with the smallest lead monomial
        return G[:-1]

    def perturb_coefficient(self, G, p):
        for i, g in enumerate(G):
            if len(g.terms) > 1:
                m, c = g.terms[1]
                terms = list(g.terms)
                new = (c + 1) % p
                if new:
                    terms[1] = (m, new)
                else:
                    del terms[1]
                return G[:i] + [Polynomial(g.ring, terms)] + G[i + 1:]
        for i, g in enumerate(G):
            if any(g.lm):
                one = g.ring.one_monomial()
                return G[:i] + [Polynomial(g.ring, g.terms + ((one, 1),))] + G[i + 1:]
        return G


class RationalVectorWorker(ModularWorker):
    """Toy worker: the result modulo p is a fixed rational vector reduced mod p."""

    def __init__(self, values: Sequence, verifier: Callable[[tuple], bool] | None = None,
                 expected_invariant=None):
        self.values = tuple(Fraction(v) for v in values)
        self.verifier = verifier
        self.expected_invariant = expected_invariant

    def applicable(self, p):
        return all(v.denominator % p for v in self.values)

    def compute(self, p):
        return tuple(Residue.of_rational(v, p).value for v in self.values)

    def signature(self, result):
        return ("vector", len(result))

    def coefficients(self, result):
        return {0: dict(enumerate(result))}

    def assemble(self, coeffs):
        if not coeffs:
            return ()
        row = coeffs[0]
        return tuple(Fraction(row.get(i, 0)) for i in range(len(row)))

    def reduce(self, value, p):
        if any(v.denominator % p == 0 for v in value):
            return None
        return tuple(Residue.of_rational(v, p).value for v in value)

    def verify(self, value):
        return True if self.verifier is None else self.verifier(value)

    def invariant(self, result, p):
        return len(result)

    def format_result(self, value):
        return "(" + ", ".join(str(v) for v in value) + ")"

    def perturb_signature(self, result, p):
        return result[:-1]

    def perturb_coefficient(self, result, p):
        if not result:
            return result
        return result[:-1] + ((result[-1] + 1) % p,)


# fault injection

FAULT_KINDS = ("none", "type1", "type2", "type3", "type4", "type5")


def _fault_kind(text) -> str:
    t = str(text).strip().lower()
    if t in FAULT_KINDS:
        return t
    if t in ("0", "1", "2", "3", "4", "5"):
        return "none" if t == "0" else f"type{t}"
    raise ValueError(f"unknown fault type {text!r}")


@dataclass(frozen=True)
class FaultPlan:
    """Which primes get which injected fault.

    ``faults`` pins a fault to specific primes.  ``rates`` maps a fault kind
    to the probability that any other prime gets it; the draw is a pure
    function of (seed, prime), so it does not depend on the order in which
    primes are used.
    """

    faults: Mapping[int, str] = field(default_factory=dict)
    rates: Mapping[str, float] = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "faults", {int(p): _fault_kind(k) for p, k in self.faults.items()})
        rates = {_fault_kind(k): float(v) for k, v in self.rates.items()}
        if sum(rates.values()) > 1:
            raise ValueError("fault rates add up to more than 1")
        object.__setattr__(self, "rates", rates)

    def fault_for(self, p: int) -> str:
        if p in self.faults:
            return self.faults[p]
        if not self.rates:
            return "none"
        u = random.Random(f"fault:{self.seed}:{p}").random()
        acc = 0.0
        for kind in sorted(self.rates):
            acc += self.rates[kind]
            if u < acc:
                return kind
        return "none"

    @property
    def is_empty(self) -> bool:
        return not self.rates and all(k == "none" for k in self.faults.values())

    @classmethod
    def parse(cls, text: str, seed: int = 0) -> FaultPlan:
        """Read ``prime type`` lines; ``random type fraction`` lines set rates."""
        faults, rates = {}, {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].split()
            if not line:
                continue
            if line[0] == "random" and len(line) == 3:
                rates[_fault_kind(line[1])] = float(line[2])
            elif len(line) == 2:
                p = int(line[0])
                if p in faults:
                    raise ValueError(f"line {lineno}: prime {p} listed twice")
                faults[p] = _fault_kind(line[1])
            else:
                raise ValueError(f"line {lineno}: expected 'prime type', got {raw!r}")
        return cls(faults, rates, seed)


class FaultyWorker(ModularWorker):
    """Wraps a worker and corrupts its modular results according to a plan.

    Only modular results are touched; :meth:`verify` and everything working
    over Q is delegated unchanged.
    """

    def __init__(self, inner: ModularWorker, plan: FaultPlan):
        self.inner = inner
        self.plan = plan
        self.expected_invariant = inner.expected_invariant

    def applicable(self, p):
        if self.plan.fault_for(p) == "type1":
            return False
        return self.inner.applicable(p)

    def compute(self, p):
        kind = self.plan.fault_for(p)
        if kind == "type2":
            raise WorkerFailure(f"injected failure modulo {p}")
        result = self.inner.compute(p)
        if kind == "type4":
            result = self.inner.perturb_signature(result, p)
        elif kind == "type5":
            result = self.inner.perturb_coefficient(result, p)
        return result

    def invariant(self, result, p):
        if self.plan.fault_for(p) == "type3":
            return ("wrong-invariant", p)
        return self.inner.invariant(result, p)

    def signature(self, result):
        return self.inner.signature(result)

    def coefficients(self, result):
        return self.inner.coefficients(result)

    def assemble(self, coeffs):
        return self.inner.assemble(coeffs)

    def reduce(self, value, p):
        return self.inner.reduce(value, p)

    def verify(self, value):
        return self.inner.verify(value)

    def format_signature(self, sig):
        return self.inner.format_signature(sig)

    def format_result(self, value):
        return self.inner.format_result(value)


def inject_faults(worker: ModularWorker, plan: FaultPlan | None) -> ModularWorker:
    if plan is None or plan.is_empty:
        return worker
    return FaultyWorker(worker, plan)


# the pipeline stages

def run_one(worker: ModularWorker, p: int) -> ModularRun:
    if not worker.applicable(p):
        return ModularRun(p, RunStatus.INAPPLICABLE, reason="input not valid modulo p")
    try:
        result = worker.compute(p)
    except WorkerFailure as exc:
        return ModularRun(p, RunStatus.FAILED, reason=str(exc))
    inv = worker.invariant(result, p)
    if worker.expected_invariant is not None and inv != worker.expected_invariant:
        return ModularRun(p, RunStatus.FAILED, invariant=inv,
                          reason=f"invariant {inv!r} != expected {worker.expected_invariant!r}")
    return ModularRun(p, RunStatus.OK, result, worker.signature(result), inv)


@dataclass(frozen=True)
class VoteOutcome:
    winner: Any
    supporters: tuple[int, ...]
    discarded: tuple[int, ...]
    tally: dict[str, int]
    tie: bool = False


def majority_vote(runs: Iterable[ModularRun], serialize: Callable[[Any], str] = repr) -> VoteOutcome:
    """Pick the signature with the most runs behind it.

    Ties go to the lexicographically smallest serialized signature.
    """
    runs = [r for r in runs if r.status in (RunStatus.OK, RunStatus.DONE)]
    if not runs:
        raise NoUsableRuns("no modular run succeeded")
    groups: dict[str, list[ModularRun]] = {}
    for r in runs:
        groups.setdefault(serialize(r.signature), []).append(r)
    tally = {k: len(v) for k, v in sorted(groups.items())}
    best = max(tally.values())
    leaders = sorted(k for k, n in tally.items() if n == best)
    winner_key = leaders[0]
    supporters = tuple(sorted(r.prime for r in groups[winner_key]))
    discarded = tuple(sorted(r.prime for r in runs if serialize(r.signature) != winner_key))
    return VoteOutcome(groups[winner_key][0].signature, supporters, discarded, tally, len(leaders) > 1)


class LiftState:
    """Coefficient-wise CRT accumulator for one signature.

    Primes are folded in one at a time, so a larger prime set only costs the
    new primes.  A position missing from some prime's result counts as
    residue 0 there.
    """

    def __init__(self, signature):
        self.signature = signature
        self.modulus = 1
        self.primes: list[int] = []
        self.values: dict[tuple, int] = {}

    def absorb(self, p: int, coeffs: Coefficients):
        entries = {(g, pos): c % p for g, row in coeffs.items() for pos, c in row.items()}
        n = self.modulus
        if n == 1:
            self.values = entries
        else:
            inv = mod_inverse(n % p, p).value
            for k in set(self.values) | set(entries):
                a = self.values.get(k, 0)
                b = entries.get(k, 0)
                # x = a (mod n), x = b (mod p)
                self.values[k] = a + n * ((b - a) * inv % p)
        self.modulus = n * p
        self.primes.append(p)

    def reconstruct(self) -> dict[Hashable, dict[Hashable, Fraction]]:
        out: dict = {}
        for (g, pos), v in self.values.items():
            res = error_tolerant(Residue(v, self.modulus)) if self.modulus > 1 else None
            if res is None:
                raise LiftFailed(f"no rational of small height matches coefficient {pos!r} "
                                 f"of generator {g!r} modulo a {self.modulus.bit_length()}-bit N")
            out.setdefault(g, {})[pos] = res.value
        return out


def lift_and_reconstruct(worker: ModularWorker, runs: Sequence[ModularRun], signature,
                         state: LiftState | None = None) -> tuple[Any, LiftState]:
    """CRT-lift the supporters' coefficients and reconstruct rationals.

    Reuses `state` when it belongs to the same signature and its primes are
    a subset of the supporters.  Raises :class:`LiftFailed` if any
    coefficient has no small enough lattice vector.
    """
    primes = sorted(r.prime for r in runs)
    if state is None or state.signature != signature or not set(state.primes) <= set(primes):
        state = LiftState(signature)
    done = set(state.primes)
    by_prime = {r.prime: r for r in runs}
    for p in primes:
        if p not in done:
            state.absorb(p, worker.coefficients(by_prime[p].result))
    if not state.primes:
        raise LiftFailed("no supporting primes")
    return worker.assemble(state.reconstruct()), state


def verify_gb(F: Sequence[Polynomial], U: Sequence[Polynomial]) -> bool:
    """U is a Groebner basis and every f in F reduces to zero modulo U.

    This certifies <F> is contained in <U>; the reverse inclusion is only
    checked probabilistically, by the extra-prime test in the driver.
    """
    if not is_groebner_basis(U):
        return False
    return all(not normal_form(f, U) for f in F)


@dataclass
class ModularOptions:
    initial_primes: int = 4
    bit_size: int = 61
    max_rounds: int = 8
    extra_primes: int = 1       # fresh primes tested against the candidate (strict mode: > 1)
    seed: int = 0
    parallelism: int = 1
    primes: Sequence[int] | None = None   # force the initial prime set
    verify: bool = True

    def __post_init__(self):
        if self.initial_primes < 1 and not self.primes:
            raise ValueError("need at least one initial prime")
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be >= 1")


@dataclass
class RunReport:
    options: dict
    rounds: list[dict] = field(default_factory=list)
    status: str = "running"
    result: str | None = None
    timings: dict[str, float] = field(default_factory=lambda: {
        "modular": 0.0, "vote": 0.0, "lift": 0.0, "extra_prime": 0.0, "verify": 0.0, "total": 0.0})

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class ModularOutcome:
    value: Any
    report: RunReport
    runs: dict[int, ModularRun]

    @property
    def rounds(self) -> int:
        return len(self.report.rounds)


def _execute(worker, primes, parallelism):
    if parallelism > 1 and len(primes) > 1:
        with ProcessPoolExecutor(max_workers=parallelism) as pool:
            runs = list(pool.map(run_one, [worker] * len(primes), primes))
    else:
        runs = [run_one(worker, p) for p in primes]
    return sorted(runs, key=lambda r: r.prime)


class _PrimeSource:
    def __init__(self, opts: ModularOptions):
        self.forced = list(opts.primes or [])
        self.stream = prime_stream(opts.bit_size, exclude=self.forced, seed=opts.seed)

    def take(self, k):
        return [next(self.stream) for _ in range(k)]


def run_modular(worker: ModularWorker, options: ModularOptions | None = None) -> ModularOutcome:
    """Run the modular scheme until a verified rational result is found.

    Raises :class:`RoundLimitExceeded` after ``options.max_rounds`` failed
    rounds, or :class:`WorkerNeverApplicable` if no prime ever produced a
    usable result.
    """
    opts = options or ModularOptions()
    report = RunReport(options={k: (list(v) if isinstance(v, (list, tuple)) else v)
                                for k, v in asdict(opts).items()})
    t_start = time.perf_counter()
    timings = report.timings
    source = _PrimeSource(opts)
    runs: dict[int, ModularRun] = {}
    pending = source.forced or source.take(opts.initial_primes)
    state = None

    def stage(name, t0):
        timings[name] += time.perf_counter() - t0

    for rnd in range(1, opts.max_rounds + 1):
        t0 = time.perf_counter()
        for run in _execute(worker, pending, opts.parallelism):
            runs[run.prime] = run
        stage("modular", t0)
        info: dict[str, Any] = {"round": rnd, "new_primes": list(pending)}
        log.debug("round %d: %d primes", rnd, len(runs))
        value, state, supporters = _attempt(worker, opts, runs, source, info, stage, state)
        if value is not None:
            for p in supporters:
                r = runs[p]
                runs[p] = ModularRun(p, RunStatus.DONE, r.result, r.signature, r.invariant)
        info["runs"] = _runs_summary(worker, runs)
        report.rounds.append(info)
        if value is not None:
            report.status = "success"
            report.result = worker.format_result(value)
            timings["total"] = time.perf_counter() - t_start
            return ModularOutcome(value, report, runs)
        pending = source.take(len(runs))

    timings["total"] = time.perf_counter() - t_start
    report.status = "failed"
    if not any(r.status in (RunStatus.OK, RunStatus.DONE) for r in runs.values()):
        raise WorkerNeverApplicable(f"no usable modular result among {len(runs)} primes")
    raise RoundLimitExceeded(f"no verified result after {opts.max_rounds} rounds", report.rounds, report)


def _runs_summary(worker, runs):
    out = []
    for r in sorted(runs.values(), key=lambda r: r.prime):
        entry = {"prime": r.prime, "status": r.status.value,
                 "signature": None if r.signature is None else worker.format_signature(r.signature)}
        if r.reason:
            entry["reason"] = r.reason
        out.append(entry)
    return out


def _attempt(worker, opts, runs, source, info, stage, state):
    """One pass of vote, lift, extra-prime test and verification.

    Returns ``(value, lift_state, supporters)`` with value None when the
    round failed.
    """
    t0 = time.perf_counter()
    try:
        vote = majority_vote(sorted(runs.values(), key=lambda r: r.prime), worker.format_signature)
    except NoUsableRuns:
        stage("vote", t0)
        info["outcome"] = "no usable runs"
        return None, state, ()
    stage("vote", t0)
    info.update(tally=vote.tally, winner=worker.format_signature(vote.winner),
                supporters=list(vote.supporters), discarded=list(vote.discarded), tie=vote.tie)

    t0 = time.perf_counter()
    supporters = [runs[p] for p in vote.supporters]
    try:
        value, state = lift_and_reconstruct(worker, supporters, vote.winner, state)
    except LiftFailed as exc:
        stage("lift", t0)
        info["lift"] = f"failed: {exc}"
        info["outcome"] = "lift failed"
        return None, state, vote.supporters
    stage("lift", t0)
    info["lift"] = "ok"

    t0 = time.perf_counter()
    checks = []
    passed = True
    for _ in range(opts.extra_primes):
        q, ok = _extra_prime_check(worker, value, runs, source)
        checks.append({"prime": q, "passed": ok})
        if not ok:
            passed = False
            break
    stage("extra_prime", t0)
    info["extra_prime_checks"] = checks
    if not passed:
        info["outcome"] = "extra-prime test failed"
        return None, state, vote.supporters

    if opts.verify:
        t0 = time.perf_counter()
        verified = worker.verify(value)
        stage("verify", t0)
        info["verified"] = verified
        if not verified:
            info["outcome"] = "verification failed"
            return None, state, vote.supporters
    info["outcome"] = "accepted"
    return value, state, vote.supporters


def _extra_prime_check(worker, value, runs, source, attempts=8):
    """Compare the candidate mod a fresh prime q with the worker's result mod q.

    The run for q joins the pool either way.  Primes where the comparison is
    undefined (worker inapplicable or failing, candidate not reducible) are
    skipped, up to `attempts` times.
    """
    q = None
    for _ in range(attempts):
        (q,) = source.take(1)
        run = run_one(worker, q)
        runs[q] = run
        if run.status != RunStatus.OK:
            continue
        image = worker.reduce(value, q)
        if image is None:
            continue
        same = (worker.signature(image) == run.signature
                and worker.coefficients(image) == worker.coefficients(run.result))
        return q, same
    return q, False


def modular_groebner(F: Sequence[Polynomial], options: ModularOptions | None = None,
                     plan: FaultPlan | None = None) -> ModularOutcome:
    """Reduced Groebner basis over Q via the modular scheme."""
    return run_modular(inject_faults(GroebnerWorker(F), plan), options)
