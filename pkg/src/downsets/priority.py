"""Deterministic finite-injury scheduler and the order it induces.

A pool of requirements, each holding a movable witness index, is driven
through numbered stages by a monotone partial evaluator: the least
requirement whose evaluator value has converged on its current witness acts,
freezes its flag, and pushes every lower-priority witness to a fresh value.
The activation log then generates a partial order on paired element families
x_n, y_n, and the verification suite checks the finite shadows of the
construction's claims against that order.

Everything here is sequential and reproducible: same evaluator, same stage
count, same log, byte for byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .poset import (
    OrderViolationError,
    Poset,
    down_closure_mask,
    is_initial_interval,
    validate,
)


@dataclass(frozen=True)
class EvalRule:
    """Threshold rule: requirement e converges to value from from_stage on,
    for one witness index y or for all of them when y is None."""

    e: int
    value: int
    from_stage: int
    y: int | None = None

    def __post_init__(self) -> None:
        if self.value not in (0, 1):
            raise ValueError("rule value must be 0 or 1")
        if self.e < 0 or self.from_stage < 0:
            raise ValueError("rule indices must be nonnegative")

    def matches(self, e: int, y: int, s: int) -> bool:
        return self.e == e and (self.y is None or self.y == y) and s >= self.from_stage


def _rules_conflict(a: EvalRule, b: EvalRule) -> bool:
    if a.e != b.e or a.value == b.value:
        return False
    return a.y is None or b.y is None or a.y == b.y


@dataclass
class Evaluator:
    """Monotone partial evaluator table.

    query(e, y, s) returns 0, 1, or None.  Convergence must be monotone:
    once a key is defined at some stage, every later query on it must
    return the same value, and any flip is a hard error rather than data.
    An optional raw table callable replaces the rule lookup (the recorder
    still applies), which is how adversarial tables are injected in tests.
    """

    rules: tuple[EvalRule, ...] = ()
    table: Callable[[int, int, int], int | None] | None = None
    _seen: dict[tuple[int, int], tuple[int, int]] = field(
        default_factory=dict, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        self.rules = tuple(self.rules)
        for i, a in enumerate(self.rules):
            for b in self.rules[i + 1 :]:
                if _rules_conflict(a, b):
                    raise ValueError(
                        f"rules for requirement {a.e} assign both values to one key"
                    )

    def query(self, e: int, y: int, s: int) -> int | None:
        if self.table is not None:
            v = self.table(e, y, s)
            if v not in (0, 1, None):
                raise ValueError("evaluator table must return 0, 1, or None")
        else:
            v = None
            for r in self.rules:
                if r.matches(e, y, s):
                    v = r.value
                    break
        key = (e, y)
        prev = self._seen.get(key)
        if prev is not None:
            s0, v0 = prev
            flip = v is not None and v != v0
            lapsed = v is None and s >= s0
            if flip or lapsed:
                raise RuntimeError(
                    f"evaluator monotonicity violation at (e={e}, y={y}): "
                    f"value {v0} from stage {s0}, then {v} at stage {s}"
                )
        if v is not None and (prev is None or s < prev[0]):
            self._seen[key] = (s, v)
        return v


def evaluator_from_rules(doc: Iterable[Mapping[str, int]] | Mapping[str, object]) -> Evaluator:
    """Build an evaluator from the JSON rule schema: a list of objects with
    keys e, value, from_stage and optional y, or {"rules": [...]}."""
    if isinstance(doc, Mapping):
        doc = doc.get("rules", [])
    rules = []
    for item in doc:
        extra = set(item) - {"e", "value", "from_stage", "y"}
        if extra:
            raise ValueError(f"unknown rule keys: {sorted(extra)}")
        rules.append(
            EvalRule(
                int(item["e"]),
                int(item["value"]),
                int(item["from_stage"]),
                None if item.get("y") is None else int(item["y"]),
            )
        )
    return Evaluator(tuple(rules))


def toy_evaluator_pool() -> Evaluator:
    """The fixed demonstration pool: fast constants, a late and a very late
    convergence, two never-converging requirements, and two pairs timed so
    the later convergence injures the earlier one."""
    return Evaluator(
        (
            EvalRule(0, 0, 5),
            EvalRule(1, 1, 3),
            EvalRule(3, 0, 40),
            EvalRule(4, 0, 60),
            EvalRule(5, 1, 10),
            EvalRule(6, 0, 100),
            EvalRule(7, 1, 20),
        )
    )


@dataclass(frozen=True)
class Activation:
    witness: int
    stage: int
    polarity: str
    requirement: int

    def __post_init__(self) -> None:
        if self.polarity not in ("low", "high"):
            raise ValueError("polarity must be low or high")


@dataclass(frozen=True)
class PriorityLog:
    """Immutable run transcript: full per-stage snapshots plus activations."""

    horizon: int
    activations: tuple[Activation, ...]
    history: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]

    @property
    def stage(self) -> int:
        return len(self.history) - 1

    @property
    def witnesses(self) -> tuple[int, ...]:
        return self.history[-1][0]

    @property
    def flags(self) -> tuple[int, ...]:
        return self.history[-1][1]


def prio_init(horizon: int) -> PriorityLog:
    """Stage-0 state: requirement e starts with witness e, flag down."""
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    w = tuple(range(horizon))
    return PriorityLog(horizon, (), ((w, (0,) * horizon),))


def prio_step(log: PriorityLog, ev: Evaluator) -> PriorityLog:
    """One stage transition.

    Requirement e requires attention when e and its witness have entered
    the stage window, its flag is down, and the evaluator has converged on
    its witness; the least such e acts.  Everything below the actor keeps
    its state, everything above is pushed to witness s+i-e with its flag
    cleared.  With no actor the state carries over unchanged.
    """
    s = log.stage
    w, r = log.witnesses, log.flags
    actor = None
    value = 0
    for e in range(log.horizon):
        if e <= s and w[e] <= s and r[e] == 0:
            v = ev.query(e, w[e], s)
            if v is not None:
                actor, value = e, v
                break
    if actor is None:
        return PriorityLog(log.horizon, log.activations, log.history + ((w, r),))
    nw = list(w)
    nr = list(r)
    nr[actor] = 1
    for i in range(actor + 1, log.horizon):
        nw[i] = s + i - actor
        nr[i] = 0
    act = Activation(w[actor], s + 1, "low" if value == 0 else "high", actor)
    return PriorityLog(
        log.horizon,
        log.activations + (act,),
        log.history + (((tuple(nw), tuple(nr))),),
    )


def prio_run(horizon: int, stages: int, ev: Evaluator) -> PriorityLog:
    """Fold prio_step the given number of times from the initial state."""
    log = prio_init(horizon)
    for _ in range(stages):
        log = prio_step(log, ev)
    return log


def _rule_two(log: PriorityLog, j: int, i: int) -> str | None:
    # rule (ii): y_j relates to z_i iff j was activated at stage s with
    # j < s <= i and no smaller witness was activated in (s, i].
    for a in log.activations:
        if a.witness != j:
            continue
        if not (j < a.stage <= i):
            return None
        for b in log.activations:
            if b.witness < j and a.stage < b.stage <= i:
                return None
        return a.polarity
    return None


def prio_order(
    log: PriorityLog, n: int, m: int, kinds: tuple[str, str] = ("x", "x")
) -> str:
    """Literal evaluation of the order rules on one element pair.

    kinds names the families of the two elements; n <= m is required.  The
    x family never sits below anything and y_n reaches z_m exactly when
    rule (ii) fires, downward for a low activation and upward for a high
    one.  Returns "less", "greater", "incomparable", or "equal".
    """
    if n > m:
        raise ValueError("first index must not exceed the second")
    kn, km = kinds
    if kn not in ("x", "y") or km not in ("x", "y"):
        raise ValueError("kinds must draw from x and y")
    if n == m and kn == km:
        return "equal"
    if kn == "y":
        pol = _rule_two(log, n, m)
        if pol == "low":
            return "less"
        if pol == "high":
            return "greater"
    # the mirrored case needs an activation stage above m sitting below n
    return "incomparable"


def prio_poset(log: PriorityLog, n_slice: int) -> Poset:
    """The finite slice of the constructed order: x_n at id 2n, y_n at
    2n+1 for n below n_slice, related per the activation rules and pushed
    through the axiom checker, whose failure would be a construction bug."""
    if n_slice < 1:
        raise ValueError("slice size must be at least 1")
    rows = [1 << k for k in range(2 * n_slice)]
    for a in log.activations:
        j = a.witness
        if j >= n_slice:
            continue
        cutoff = n_slice
        for b in log.activations:
            if b.witness < j and b.stage > a.stage:
                cutoff = min(cutoff, b.stage - 1)
        for i in range(a.stage, min(cutoff + 1, n_slice)):
            if a.polarity == "low":
                rows[2 * j + 1] |= (1 << 2 * i) | (1 << (2 * i + 1))
            else:
                rows[2 * i] |= 1 << (2 * j + 1)
                rows[2 * i + 1] |= 1 << (2 * j + 1)
    labels = []
    for k in range(n_slice):
        labels.append(f"x{k}")
        labels.append(f"y{k}")
    try:
        return validate(rows, range(2 * n_slice), labels)
    except OrderViolationError as err:
        raise AssertionError(
            f"activation order violates {err.axiom} at {err.witness}; "
            "construction bug"
        ) from err


def log_properties(log: PriorityLog) -> tuple[bool, bool]:
    """The two structural log properties: no witness activates twice, and
    an activation at stage s is never followed by one of a witness strictly
    between its own witness and s."""
    seen = [a.witness for a in log.activations]
    one = len(seen) == len(set(seen))
    two = True
    for a in log.activations:
        for b in log.activations:
            if a.witness < b.witness < a.stage and b.stage > a.stage:
                two = False
    return one, two


def prio_verify(log: PriorityLog, ev: Evaluator, n_slice: int) -> dict:
    """Check the finite shadows of the construction's claims on a slice.

    Clauses: (a) the slice passes the order axioms; (b) the x family is
    pairwise incomparable; (c) the two log properties; (d) each requirement
    whose flag survived to the end bounds the tail of the slice through its
    final witness, downward for low polarity and upward for high; (e) each
    requirement whose evaluator guess is total on the slice and carves out
    an initial interval has that interval generated by an explicit finite
    subset, which is reported.
    """
    report: dict = {}
    try:
        P = prio_poset(log, n_slice)
        report["axioms"] = {"pass": True}
    except AssertionError as err:
        P = None
        report["axioms"] = {"pass": False, "detail": str(err)}
    if P is not None:
        ok = True
        for i in range(n_slice):
            for j in range(i + 1, n_slice):
                if P.leq(2 * i, 2 * j) or P.leq(2 * j, 2 * i):
                    ok = False
        report["x_antichain"] = {"pass": ok}
    else:
        report["x_antichain"] = {"pass": False, "detail": "no poset"}
    one, two = log_properties(log)
    report["properties"] = {"one": one, "two": two, "pass": one and two}
    final_flags = log.flags
    tails: dict[int, dict] = {}
    if P is not None:
        for e in range(log.horizon):
            if final_flags[e] != 1:
                continue
            acts = [a for a in log.activations if a.requirement == e]
            a = acts[-1]
            entry: dict = {"witness": a.witness, "stage": a.stage, "polarity": a.polarity}
            if a.witness >= n_slice:
                entry.update(pass_=True, note="witness outside slice")
            else:
                ok = True
                for i in range(a.stage + 1, n_slice):
                    for z in (2 * i, 2 * i + 1):
                        if a.polarity == "low" and not P.leq(2 * a.witness + 1, z):
                            ok = False
                        if a.polarity == "high" and not P.leq(z, 2 * a.witness + 1):
                            ok = False
                entry.update(
                    pass_=ok,
                    note="vacuous tail" if a.stage + 1 >= n_slice else None,
                )
            tails[e] = {k.rstrip("_"): v for k, v in entry.items() if v is not None}
    report["tails"] = tails
    guesses: dict[int, dict] = {}
    if P is not None:
        s_final = log.stage
        for e in range(log.horizon):
            vals = [ev.query(e, n, s_final) for n in range(n_slice)]
            if any(v is None for v in vals):
                guesses[e] = {"applicable": False, "reason": "guess is partial on the slice"}
                continue
            ival = frozenset(2 * n + 1 for n in range(n_slice) if vals[n] == 1)
            if not is_initial_interval(P, ival):
                guesses[e] = {
                    "applicable": False,
                    "reason": "guess does not carve an initial interval",
                }
                continue
            mask = P.mask_of(ival)
            gens = [
                P.ids[i]
                for i in range(P.n)
                if mask >> i & 1 and not (P.up[i] & mask & ~(1 << i))
            ]
            gen_ok = down_closure_mask(P, P.mask_of(gens)) == mask
            guesses[e] = {"applicable": True, "pass": gen_ok, "generators": sorted(gens)}
    report["interval_guesses"] = guesses
    clause_pass = [
        report["axioms"]["pass"],
        report["x_antichain"]["pass"],
        report["properties"]["pass"],
        all(t.get("pass", False) for t in tails.values()),
        all(g.get("pass", True) for g in guesses.values()),
    ]
    report["all_pass"] = all(clause_pass)
    return report


def log_to_json(log: PriorityLog) -> str:
    """Deterministic JSON transcript; golden comparisons are byte-exact."""
    doc = {
        "horizon": log.horizon,
        "final_stage": log.stage,
        "activations": [
            {
                "witness": a.witness,
                "stage": a.stage,
                "polarity": a.polarity,
                "requirement": a.requirement,
            }
            for a in log.activations
        ],
        "stages": [
            {"stage": s, "witnesses": list(w), "flags": list(r)}
            for s, (w, r) in enumerate(log.history)
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def log_from_json(text: str) -> PriorityLog:
    doc = json.loads(text)
    acts = tuple(
        Activation(a["witness"], a["stage"], a["polarity"], a["requirement"])
        for a in doc["activations"]
    )
    history = tuple(
        (tuple(s["witnesses"]), tuple(s["flags"])) for s in doc["stages"]
    )
    log = PriorityLog(doc["horizon"], acts, history)
    if log.stage != doc["final_stage"]:
        raise ValueError("transcript stage count disagrees with final_stage")
    return log
