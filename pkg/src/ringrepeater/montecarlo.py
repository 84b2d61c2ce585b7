"""Monte Carlo executor for logical fusions and Pauli measurements.

Runs the full measurement strategies on concatenated rings with sampled
photon loss and depolarizing errors. Decisions in the strategy tree depend
only on loss flags and fusion coins, and Pauli errors commute through to
measurement as classical sign flips, so each trial is scored exactly with a
Pauli-frame bookkeeping against the noiseless run; the stabilizer tableau
is used by the test suite to validate this bookkeeping, not per trial.

Outcome recoverability is decided algebraically: a logical parity is
recoverable exactly when it lies in the GF(2) span of the measured
operators modulo the two ring codes' stabilizer groups. The solver works at
code-qubit level (children summarized by their recovered logical parities),
which is exact for physical layers and matches the analytic recursions'
bookkeeping above them.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ringrepeater.paulis import Pauli, PauliOp, anticommutes
from ringrepeater.ringcodes import (
    BRANCH_SINGLES,
    FAILURE_BASES,
    RingCodeSpec,
    bare_code_ops,
    fusion_strategy,
    pattern_slot_bases,
    pauli_patterns,
)

OUTCOME_CLASSES = ("success", "fail_x", "fail_y", "fail_z", "loss", "error", "detected")


@dataclass(frozen=True)
class TrialConfig:
    """Parameters of one Monte Carlo run."""

    spec: RingCodeSpec
    eta: float
    lam: float = 0.0
    trials: int = 100_000
    seed: int = 2024

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError("eta must lie in [0, 1]")
        if not 0.0 <= self.lam <= 0.75:
            raise ValueError("lambda must lie in [0, 3/4]")
        if self.trials < 1:
            raise ValueError("need at least one trial")
        if 2 * self.spec.photon_count > 4096:
            raise ResourceWarning("state size exceeds the practical bound")


@dataclass
class EmpiricalStats:
    """Outcome-class counts with binomial standard errors."""

    trials: int
    counts: dict[str, int]

    def rate(self, cls: str, denominator: Optional[int] = None) -> float:
        d = self.trials if denominator is None else denominator
        return self.counts.get(cls, 0) / d if d else 0.0

    def stderr(self, cls: str, denominator: Optional[int] = None) -> float:
        d = self.trials if denominator is None else denominator
        if not d:
            return 0.0
        p = self.counts.get(cls, 0) / d
        return float(np.sqrt(max(p * (1 - p), 1e-300) / d))

    def to_json(self) -> str:
        payload = {
            "trials": self.trials,
            "counts": dict(sorted(self.counts.items())),
            "rates": {k: self.rate(k) for k in sorted(self.counts)},
            "stderr": {k: self.stderr(k) for k in sorted(self.counts)},
        }
        return json.dumps(payload, indent=2, sort_keys=True)

    def csv_rows(self, depth: int, eta: float, lam: float) -> list[dict]:
        rows = []
        for cls in sorted(self.counts):
            rows.append(
                {
                    "depth": depth,
                    "eta": eta,
                    "lambda": lam,
                    "trials": self.trials,
                    "outcome": cls,
                    "count": self.counts[cls],
                    "rate": self.rate(cls),
                    "stderr": self.stderr(cls),
                }
            )
        return rows


# -- slot-level recoverability solver ----------------------------------------

_CODE = bare_code_ops()
_LETTER_BITS = {Pauli.X: (1, 0), Pauli.Y: (1, 1), Pauli.Z: (0, 1)}


def _vec(side_letters_a: dict[int, Pauli], side_letters_b: dict[int, Pauli]) -> int:
    """Symplectic vector over 8 slot-qubits (A slots 0-3, B slots 4-7)."""
    x = z = 0
    for slot, p in side_letters_a.items():
        xb, zb = _LETTER_BITS[p]
        x |= xb << (slot - 1)
        z |= zb << (slot - 1)
    for slot, p in side_letters_b.items():
        xb, zb = _LETTER_BITS[p]
        x |= xb << (slot + 3)
        z |= zb << (slot + 3)
    return x | (z << 8)


def _op_vec(op: PauliOp, offset: int) -> int:
    return (op.x << offset) | ((op.z << offset) << 8)


_STAB_VECS = [_op_vec(s, 0) for s in _CODE["stabilizers"]] + [
    _op_vec(s, 4) for s in _CODE["stabilizers"]
]
_TARGETS = {
    "x": _op_vec(_CODE["X"], 0) | _op_vec(_CODE["X"], 4),
    "y": _op_vec(_CODE["Y"], 0) | _op_vec(_CODE["Y"], 4),
    "z": _op_vec(_CODE["Z"], 0) | _op_vec(_CODE["Z"], 4),
}


def _reduce(vec: int, pivots: list[tuple[int, int]]) -> int:
    for bit, row in pivots:
        if vec & (1 << bit):
            vec ^= row
    return vec


def _make_pivots(vectors: list[int]) -> list[tuple[int, int]]:
    pivots: list[tuple[int, int]] = []
    for v in vectors:
        v = _reduce(v, pivots)
        if v:
            pivots.append((v.bit_length() - 1, v))
            pivots.sort(reverse=True)
    return pivots


_STAB_PIVOTS = _make_pivots(_STAB_VECS)


class _SlotSolver:
    """Cached GF(2) recoverability of the three logical parities.

    Measured operators are described at slot level; children that succeeded
    contribute both parity vectors, failed children one, and single-qubit
    (logical) measurements one per side. Answers are memoized on the
    descriptor tuple.
    """

    def __init__(self):
        self.cache: dict[tuple, dict] = {}

    def solve(self, ops: tuple) -> dict:
        hit = self.cache.get(ops)
        if hit is not None:
            return hit
        vecs = []
        for desc in ops:
            kind = desc[0]
            if kind == "atom":
                _, slot, letter = desc
                p = Pauli(letter)
                vecs.append(_vec({slot: p}, {slot: p}))
            elif kind == "single":
                _, side, slot, letter = desc
                p = Pauli(letter)
                if side == 0:
                    vecs.append(_vec({slot: p}, {}))
                else:
                    vecs.append(_vec({}, {slot: p}))
            else:
                raise ValueError(kind)
        reduced = [_reduce(v, _STAB_PIVOTS) for v in vecs]
        # Gaussian elimination among measured ops, remembering compositions.
        pivots: list[tuple[int, int, int]] = []  # (bit, vector, membership mask)
        for i, v in enumerate(reduced):
            m = 1 << i
            for bit, row, mem in pivots:
                if v & (1 << bit):
                    v ^= row
                    m ^= mem
            if v:
                pivots.append((v.bit_length() - 1, v, m))
                pivots.sort(reverse=True)
        result = {}
        for name, tvec in _TARGETS.items():
            t = _reduce(tvec, _STAB_PIVOTS)
            m = 0
            for bit, row, mem in pivots:
                if t & (1 << bit):
                    t ^= row
                    m ^= mem
            if t == 0:
                result[name] = tuple(i for i in range(len(ops)) if m & (1 << i))
            else:
                result[name] = None
        # second, disjoint representation (for error detection)
        result["second"] = {}
        for name, tvec in _TARGETS.items():
            rep = result[name]
            if rep is None:
                result["second"][name] = None
                continue
            used = set(rep)
            pivots2: list[tuple[int, int, int]] = []
            for i, v in enumerate(reduced):
                if i in used:
                    continue
                m = 1 << i
                for bit, row, mem in pivots2:
                    if v & (1 << bit):
                        v ^= row
                        m ^= mem
                if v:
                    pivots2.append((v.bit_length() - 1, v, m))
                    pivots2.sort(reverse=True)
            t = _reduce(tvec, _STAB_PIVOTS)
            m = 0
            for bit, row, mem in pivots2:
                if t & (1 << bit):
                    t ^= row
                    m ^= mem
            result["second"][name] = (
                tuple(i for i in range(len(ops)) if m & (1 << i)) if t == 0 else None
            )
        self.cache[ops] = result
        return result


_SOLVER = _SlotSolver()


# -- trial context ------------------------------------------------------------


class _Trial:
    """Sampled randomness for one trial: losses, error letters, coins."""

    __slots__ = ("lost", "err", "rng")

    def __init__(self, lost: np.ndarray, err: np.ndarray, rng: np.random.Generator):
        self.lost = lost
        self.err = err  # 0 = I, 1 = X, 2 = Y, 3 = Z per photon
        self.rng = rng

    def flips(self, photon: int, basis: Pauli) -> bool:
        code = self.err[photon]
        if code == 0:
            return False
        letter = (Pauli.X, Pauli.Y, Pauli.Z)[code - 1]
        return anticommutes(letter, basis)


def _sample_trial(cfg: TrialConfig, num_photons: int, rng: np.random.Generator) -> _Trial:
    lost = rng.random(num_photons) >= cfg.eta
    u = rng.random(num_photons)
    err = np.zeros(num_photons, dtype=np.int8)
    lam = cfg.lam
    err[u < lam / 3] = 1
    err[(u >= lam / 3) & (u < 2 * lam / 3)] = 2
    err[(u >= 2 * lam / 3) & (u < lam)] = 3
    return _Trial(lost, err, rng)


# -- Pauli measurement walker -------------------------------------------------


def _walk_pauli(trial: _Trial, level: int, offset: int, basis: Pauli):
    """Recursive passive logical measurement.

    Returns (available, flagged, flip). A block is available when at least
    one of its two patterns was fully measured; flagged when both patterns
    were flagged, or both were available, unflagged, and disagreed.
    """
    if level == 0:
        if trial.lost[offset]:
            return False, False, False
        return True, False, trial.flips(offset, basis)
    size = 4 ** (level - 1)
    slot_bases = pattern_slot_bases(basis)
    sub = [
        _walk_pauli(trial, level - 1, offset + k * size, slot_bases[k])
        for k in range(4)
    ]
    pat1, pat2 = pauli_patterns(basis)
    return _combine_pauli(sub, pat1.measured, pat2.measured)


def _combine_pauli(sub, slots1, slots2):
    a1 = all(sub[s - 1][0] for s in slots1)
    a2 = all(sub[s - 1][0] for s in slots2)
    f1 = any(sub[s - 1][1] for s in slots1)
    f2 = any(sub[s - 1][1] for s in slots2)
    v1 = v2 = False
    if a1:
        for s in slots1:
            v1 ^= sub[s - 1][2]
    if a2:
        for s in slots2:
            v2 ^= sub[s - 1][2]
    if a1 and a2:
        if f1 and f2:
            return True, True, False
        if f1:
            return True, False, v2
        if f2:
            return True, False, v1
        if v1 != v2:
            return True, True, False
        return True, False, v1
    if a1:
        return True, f1, v1
    if a2:
        return True, f2, v2
    return False, False, False


# -- fusion walker -------------------------------------------------------------


def _walk_fusion(trial: _Trial, spec: RingCodeSpec, layer: int, off_a: int, off_b: int,
                 failure_basis: Pauli):
    """Recursive logical fusion between two blocks at the given layer.

    Returns dict(class, parities={basis: (flip, flag)}, detected=bool).
    Layer 1 fuses photons; adaptive layers stop fusing after the first
    success, fuse-all layers (> switch_layer) keep fusing until a failure
    or loss and use the redundant parities for error detection.
    """
    if layer == 0:
        raise AssertionError("fusion bottoms out at layer 1")
    size = 4 ** (layer - 1)
    adaptive = layer <= spec.switch_layer

    ops: list[tuple] = []
    flips: list = []  # parallel to ops: (flip, flag)
    outcomes: list[str] = []
    child_parities: list[Optional[dict]] = []

    def attempt(slot: int) -> str:
        pa = off_a + (slot - 1) * size
        pb = off_b + (slot - 1) * size
        if layer == 1:
            if trial.lost[pa] or trial.lost[pb]:
                child_parities.append(None)
                return "L"
            if trial.rng.integers(2) == 0:
                for letter in ("X", "Y", "Z"):
                    ops.append(("atom", slot, letter))
                    p = Pauli(letter)
                    flips.append((trial.flips(pa, p) ^ trial.flips(pb, p), False))
                child_parities.append(None)
                return "S"
            fb = FAILURE_BASES[slot - 1] if failure_basis is None else failure_basis
            for side, photon in ((0, pa), (1, pb)):
                ops.append(("single", side, slot, fb.value))
                flips.append((trial.flips(photon, fb), False))
            child_parities.append(None)
            return "F"
        child = _walk_fusion(trial, spec, layer - 1, pa, pb, None)
        child_parities.append(child["parities"])
        if child["class"] == "success":
            for letter in ("x", "y", "z"):
                ops.append(("atom", slot, letter.upper()))
                flips.append(child["parities"][letter])
            return "S"
        if child["class"] == "loss":
            return "L"
        basis = child["class"][-1]
        ops.append(("atom", slot, basis.upper()))
        flips.append(child["parities"][basis])
        return "F"

    def singles(slot: int, basis: Pauli) -> None:
        for side, off in ((0, off_a), (1, off_b)):
            block = off + (slot - 1) * size
            avail, flag, flip = _walk_pauli(trial, layer - 1, block, basis)
            if avail:
                ops.append(("single", side, slot, basis.value))
                flips.append((flip, flag))

    prefix: list[str] = []
    detected = False
    if adaptive:
        success_at = None
        for slot in (1, 2, 3, 4):
            out = attempt(slot)
            outcomes.append(out)
            if out == "S":
                success_at = slot
                break
            prefix.append(out)
        if success_at is not None:
            for slot, basis in BRANCH_SINGLES[tuple(prefix)].items():
                if slot > success_at:
                    singles(slot, basis)
    else:
        stopped = None
        for slot in (1, 2, 3, 4):
            out = attempt(slot)
            outcomes.append(out)
            if out != "S":
                stopped = slot
                break
        if stopped is not None:
            completion = {2: Pauli.Z, 3: Pauli.X, 4: Pauli.Z}
            for slot in range(stopped + 1, 5):
                singles(slot, completion[slot])

    key = tuple(ops)
    sol = _SOLVER.solve(key)
    parities = {}
    for name in ("x", "y", "z"):
        rep = sol[name]
        if rep is None:
            continue
        flip = False
        flag = False
        for i in rep:
            f, fl = flips[i]
            flip ^= f
            flag |= fl
        if not adaptive:
            rep2 = sol["second"][name]
            if rep2 is not None:
                flip2 = False
                flag2 = False
                for i in rep2:
                    f, fl = flips[i]
                    flip2 ^= f
                    flag2 |= fl
                if flag and not flag2:
                    flip, flag = flip2, flag2
                elif not flag and not flag2 and flip != flip2:
                    detected = True
                elif flag and flag2:
                    flag = True
        parities[name] = (flip, flag)

    recovered = sorted(parities)
    if len(recovered) >= 2:
        cls = "success"
    elif len(recovered) == 1:
        cls = f"fail_{recovered[0]}"
    else:
        cls = "loss"
    return {"class": cls, "parities": parities, "detected": detected,
            "ops": key, "flips": tuple(flips), "solution": sol}


# -- public simulation API ------------------------------------------------------



_PARTITION_SIZE = 4096


def _partitions(cfg: TrialConfig):
    """Deterministic trial partitions: stream i is seeded by (seed, i).

    Results are therefore independent of how partitions are scheduled
    across workers.
    """
    start = 0
    index = 0
    while start < cfg.trials:
        size = min(_PARTITION_SIZE, cfg.trials - start)
        yield start, size, np.random.default_rng([cfg.seed, index])
        start += size
        index += 1


def _fusion_partition(cfg: TrialConfig, size: int, rng) -> dict[str, int]:
    spec = cfg.spec
    num_photons = 2 * spec.photon_count
    counts = {k: 0 for k in OUTCOME_CLASSES}
    for _ in range(size):
        trial = _sample_trial(cfg, num_photons, rng)
        res = _walk_fusion(trial, spec, spec.N, 0, spec.photon_count, None)
        counts[res["class"]] += 1
        if res["class"] == "success" or res["class"].startswith("fail"):
            if any(flag for _, flag in res["parities"].values()) or res["detected"]:
                counts["detected"] += 1
            elif any(flip for flip, _ in res["parities"].values()):
                counts["error"] += 1
    return counts


def _run_partitions(cfg: TrialConfig, worker, threads: int) -> dict[str, int]:
    parts = list(_partitions(cfg))
    if threads <= 1 or len(parts) == 1:
        results = [worker(cfg, size, rng) for _, size, rng in parts]
    else:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda p: worker(cfg, p[1], p[2]), parts))
    total: dict[str, int] = {}
    for counts in results:  # associative, commutative reduction
        for k, v in counts.items():
            total[k] = total.get(k, 0) + v
    return total


def simulate_logical_fusion(cfg: TrialConfig, threads: int = 1) -> EmpiricalStats:
    """Monte Carlo of the adaptive (or fuse-all) logical fusion.

    Per trial: sample loss flags and one depolarizing event per photon,
    walk the fusion strategy decision tree, classify the outcome, and score
    parity errors against the noiseless ground truth (the sampled errors
    flip measured signs; the noiseless run shares all coin flips, so the
    flip bookkeeping is exact). Trials are partitioned deterministically,
    so results do not depend on the worker count.
    """
    fusion_strategy(cfg.spec)  # validates n == 4
    counts = _run_partitions(cfg, _fusion_partition, threads)
    for k in OUTCOME_CLASSES:
        counts.setdefault(k, 0)
    return EmpiricalStats(trials=cfg.trials, counts=counts)


def simulate_pauli_measurement(cfg: TrialConfig, logical: Pauli,
                               threads: int = 1) -> EmpiricalStats:
    """Monte Carlo of the passive logical Pauli measurement on one ring.

    Counts transmission (any representative recovered), detection
    (representatives disagree or all flagged below), undetected error
    (value recovered but wrong), and loss.
    """
    spec = cfg.spec
    logical = Pauli(logical)

    def worker(cfg_, size, rng):
        counts = {"success": 0, "error": 0, "detected": 0, "loss": 0}
        for _ in range(size):
            trial = _sample_trial(cfg_, spec.photon_count, rng)
            avail, flag, flip = _walk_pauli(trial, spec.N, 0, logical)
            if not avail:
                counts["loss"] += 1
            elif flag:
                counts["detected"] += 1
            elif flip:
                counts["error"] += 1
            else:
                counts["success"] += 1
        return counts

    return EmpiricalStats(trials=cfg.trials, counts=_run_partitions(cfg, worker, threads))


# -- exact enumeration ----------------------------------------------------------


def _pauli_block_distribution(level: int, basis: Pauli, eta: float, eps: float):
    """Exact distribution over (available, flagged, flip) for one block."""
    if level == 0:
        return {
            (False, False, False): 1.0 - eta,
            (True, False, False): eta * (1.0 - eps),
            (True, False, True): eta * eps,
        }
    slot_bases = pattern_slot_bases(basis)
    subs = [_pauli_block_distribution(level - 1, slot_bases[k], eta, eps) for k in range(4)]
    pat1, pat2 = pauli_patterns(basis)
    out: dict[tuple, float] = {}
    states = [list(s.items()) for s in subs]
    for s1, p1 in states[0]:
        for s2, p2 in states[1]:
            for s3, p3 in states[2]:
                for s4, p4 in states[3]:
                    w = p1 * p2 * p3 * p4
                    if w == 0.0:
                        continue
                    key = _combine_pauli([s1, s2, s3, s4], pat1.measured, pat2.measured)
                    out[key] = out.get(key, 0.0) + w
    return out


def enumerate_pauli(spec: RingCodeSpec, eta: float, lam: float, logical: Pauli) -> dict[str, float]:
    """Exact outcome probabilities of the passive logical Pauli measurement."""
    if spec.N > 2:
        raise ValueError("exact enumeration supported for N <= 2")
    eps = 2.0 * lam / 3.0
    dist = _pauli_block_distribution(spec.N, Pauli(logical), eta, eps)
    out = {"success": 0.0, "error": 0.0, "detected": 0.0, "loss": 0.0}
    for (avail, flag, flip), w in dist.items():
        if not avail:
            out["loss"] += w
        elif flag:
            out["detected"] += w
        elif flip:
            out["error"] += w
        else:
            out["success"] += w
    return out


def enumerate_fusion(spec: RingCodeSpec, eta: float, lam: float) -> dict[str, float]:
    """Exact probability-weighted enumeration of the logical fusion outcome.

    Enumerates all loss patterns, all per-photon Pauli errors, and both
    fusion coin outcomes, composing sub-blocks exactly (blocks are disjoint,
    so their randomness is independent). Supported for N <= 2.
    """
    if spec.N > 2:
        raise ValueError("exact enumeration supported for N <= 2")
    fusion_strategy(spec)
    eps = 2.0 * lam / 3.0

    # --- layer-1 needs bespoke handling of failure singles (per photon) ---
    def layer1_dist() -> dict[tuple, float]:
        lam_ = lam

        def photon_states():
            return {
                None: 1.0 - eta,           # lost
                0: eta * (1.0 - lam_),     # I
                1: eta * lam_ / 3.0,       # X
                2: eta * lam_ / 3.0,       # Y
                3: eta * lam_ / 3.0,       # Z
            }

        letters = {1: Pauli.X, 2: Pauli.Y, 3: Pauli.Z}

        def flips_of(code: int, basis: Pauli) -> bool:
            return code != 0 and anticommutes(letters[code], basis)

        out: dict[tuple, float] = {}

        def add(path_w, ops, flips):
            sol = _SOLVER.solve(tuple(ops))
            parities = {}
            for name in ("x", "y", "z"):
                rep = sol[name]
                if rep is None:
                    continue
                flip = False
                for i in rep:
                    flip ^= flips[i][0]
                parities[name] = (flip, False)
            rec = sorted(parities)
            if len(rec) >= 2:
                cls = "success"
            elif len(rec) == 1:
                cls = f"fail_{rec[0]}"
            else:
                cls = "loss"
            ptuple = tuple(parities.get(n, None) for n in ("x", "y", "z"))
            key = (cls, ptuple, False)
            out[key] = out.get(key, 0.0) + path_w

        ph = photon_states()

        def attempt(slot, w, ops, flips, prefix):
            if slot > 4:
                add(w, ops, flips)
                return
            fb = FAILURE_BASES[slot - 1]
            for ca, pa in ph.items():
                for cb, pb in ph.items():
                    w2 = w * pa * pb
                    if w2 == 0.0:
                        continue
                    if ca is None or cb is None:
                        attempt(slot + 1, w2, ops, flips, prefix + ("L",))
                        continue
                    # success coin
                    sf = []
                    for letter in ("X", "Y", "Z"):
                        p = Pauli(letter)
                        sf.append(((flips_of(ca, p) ^ flips_of(cb, p)), False))
                    ops_s = ops + tuple(("atom", slot, L) for L in ("X", "Y", "Z"))
                    finish(slot, w2 / 2.0, ops_s, flips + tuple(sf), prefix)
                    ops_f = ops + (("single", 0, slot, fb.value),
                                   ("single", 1, slot, fb.value))
                    flips_f = flips + (((flips_of(ca, fb)), False),
                                       ((flips_of(cb, fb)), False))
                    attempt(slot + 1, w2 / 2.0, ops_f, flips_f, prefix + ("F",))

        def finish(slot, w, ops, flips, prefix):
            bases = BRANCH_SINGLES[prefix]
            items = [(s, b) for s, b in bases.items() if s > slot]

            def expand(i, w2, ops2, flips2):
                if i == len(items):
                    add(w2, ops2, flips2)
                    return
                s, b = items[i]
                for ca, pa in ph.items():
                    for cb, pb in ph.items():
                        w3 = w2 * pa * pb
                        if w3 == 0.0:
                            continue
                        ops3, flips3 = ops2, flips2
                        if ca is not None:
                            ops3 = ops3 + (("single", 0, s, b.value),)
                            flips3 = flips3 + ((flips_of(ca, b), False),)
                        if cb is not None:
                            ops3 = ops3 + (("single", 1, s, b.value),)
                            flips3 = flips3 + ((flips_of(cb, b), False),)
                        expand(i + 1, w3, ops3, flips3)

            expand(0, w, ops, flips)

        attempt(1, 1.0, (), (), ())
        return out

    if spec.N == 1:
        dist = layer1_dist()
    else:
        # N = 2: top layer walks over exact layer-1 summaries
        base = layer1_dist()
        summaries: dict[tuple, float] = {}
        for (cls, pars, _det), w in base.items():
            if cls == "success":
                key = ("S", pars)
            elif cls == "loss":
                key = ("L",)
            else:
                basis = cls[-1]
                flip_flag = dict(zip("xyz", pars))[basis]
                key = ("F", basis, flip_flag)
            summaries[key] = summaries.get(key, 0.0) + w

        eps_ = eps
        single_cache: dict[Pauli, dict] = {}

        def single_dist(b: Pauli):
            if b not in single_cache:
                single_cache[b] = _pauli_block_distribution(1, b, eta, eps_)
            return single_cache[b]

        out: dict[tuple, float] = {}

        def add(path_w, ops, flips):
            sol = _SOLVER.solve(tuple(ops))
            parities = {}
            for name in ("x", "y", "z"):
                rep = sol[name]
                if rep is None:
                    continue
                flip = flag = False
                for i in rep:
                    f, fl = flips[i]
                    flip ^= f
                    flag |= fl
                parities[name] = (flip, flag)
            rec = sorted(parities)
            if len(rec) >= 2:
                cls = "success"
            elif len(rec) == 1:
                cls = f"fail_{rec[0]}"
            else:
                cls = "loss"
            key = (cls, tuple(parities.get(n) for n in "xyz"), False)
            out[key] = out.get(key, 0.0) + path_w

        def finish(slot, w, ops, flips, prefix):
            bases = BRANCH_SINGLES[prefix]
            items = [(s, b) for s, b in bases.items() if s > slot]

            def expand(i, w2, ops2, flips2):
                if i == len(items):
                    add(w2, ops2, flips2)
                    return
                s, b = items[i]
                d = single_dist(b)
                for (a_av, a_fl, a_fp), pa in d.items():
                    for (b_av, b_fl, b_fp), pb in d.items():
                        w3 = w2 * pa * pb
                        if w3 == 0.0:
                            continue
                        ops3, flips3 = ops2, flips2
                        if a_av:
                            ops3 = ops3 + (("single", 0, s, b.value),)
                            flips3 = flips3 + ((a_fp, a_fl),)
                        if b_av:
                            ops3 = ops3 + (("single", 1, s, b.value),)
                            flips3 = flips3 + ((b_fp, b_fl),)
                        expand(i + 1, w3, ops3, flips3)

            expand(0, w, ops, flips)

        def attempt(slot, w, ops, flips, prefix):
            if slot > 4:
                add(w, ops, flips)
                return
            for summary, pw in summaries.items():
                w2 = w * pw
                if w2 == 0.0:
                    continue
                if summary[0] == "L":
                    attempt(slot + 1, w2, ops, flips, prefix + ("L",))
                elif summary[0] == "F":
                    basis, flip_flag = summary[1], summary[2]
                    attempt(slot + 1, w2, ops + (("atom", slot, basis.upper()),),
                            flips + (flip_flag,), prefix + ("F",))
                else:
                    pars = summary[1]
                    ops_s = ops + tuple(("atom", slot, L) for L in ("X", "Y", "Z"))
                    finish(slot, w2, ops_s, flips + tuple(pars), prefix)

        attempt(1, 1.0, (), (), ())
        dist = out

    result = {"success": 0.0, "fail_x": 0.0, "fail_y": 0.0, "fail_z": 0.0,
              "loss": 0.0, "error": 0.0, "detected": 0.0}
    for (cls, pars, det), w in dist.items():
        result[cls] += w
        if cls != "loss":
            flags = any(p is not None and p[1] for p in pars)
            flipped = any(p is not None and p[0] for p in pars)
            if det or flags:
                result["detected"] += w
            elif flipped:
                result["error"] += w
    return result


def enumerate_small(cfg: TrialConfig, mode: str = "fusion",
                    logical: Pauli = Pauli.X) -> dict[str, float]:
    """Exact outcome distribution by enumeration (N <= 2).

    mode 'fusion' enumerates all loss patterns, per-photon Pauli errors,
    and both fusion coin outcomes; mode 'pauli' does the same for the
    passive logical measurement. Replaces sampling error with exact
    arithmetic.
    """
    if mode == "fusion":
        return enumerate_fusion(cfg.spec, cfg.eta, cfg.lam)
    if mode == "pauli":
        return enumerate_pauli(cfg.spec, cfg.eta, cfg.lam, logical)
    raise ValueError(f"unknown mode {mode!r}")
