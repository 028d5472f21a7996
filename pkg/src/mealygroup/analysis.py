"""Section closures, the word problem, and exhaustive depth/growth surveys.

The closure of a state word is the set of all its sections, discovered
breadth-first by input length: level 0 is the word itself, level L+1 holds
the sections first reached by reading one more letter.  The closure is
finite, its last new level is the word's *depth*, and a word acts as the
identity exactly when every closure member permutes single letters
trivially -- which is the decision procedure behind :func:`is_identity`.

The survey enumerates all words up to a length bound and reports, per
length, the maximum depth and the maximum number of sections together
with witnesses.  Two value-preserving reductions keep this tractable:
words containing do-nothing states are skipped (inserting such a state
changes neither depth nor section count), and only the lexicographically
least representative of each orbit under the machine's letter-relabeling
automorphisms is examined.  Workers split the word space by canonical
prefix; results merge by a max-value / lex-least-witness rule, so output
is identical for any worker count.

For machines of the dies-or-stays shape (every state either survives a
letter unchanged or drops to the do-nothing state, as the Hanoi family
does) sections of a fixed word are encoded as bitmasks of surviving
positions, which keeps the exhaustive runs fast.
"""

from __future__ import annotations

import csv
import hashlib
import io
import itertools
import json
import multiprocessing
import random
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Optional, Sequence

from .automata import (
    Automaton,
    AutomatonError,
    check_state_word,
    format_automaton,
    format_state_word,
)

__all__ = [
    "SectionClosure",
    "section_closure",
    "word_depth",
    "section_count",
    "is_identity",
    "common_fixed_letter",
    "strip_fixed_letter",
    "fixed_block_count",
    "GrowthRow",
    "GrowthReport",
    "BudgetError",
    "WORD_BUDGET",
    "survey",
    "depth_function",
    "growth_function",
    "render_growth_csv",
    "automaton_symmetries",
    "orbit_count",
    "strict_log2",
    "threshold_bound",
    "fixing_threshold",
    "ThresholdSample",
    "ThresholdReport",
    "threshold_survey",
    "render_threshold_csv",
]


# ---------------------------------------------------------------------------
# Closure machinery.


def _closure_engine(auto: Automaton, word: Sequence[int]):
    """Return (root, expand, decode) for the section BFS of ``word``.

    ``expand(node)`` gives the m children (sections at one more letter)
    and the m output letters (the node's action on single letters, 1-based
    via +1).  ``decode`` turns a node into a plain state-index tuple.
    """
    w = check_state_word(auto, word)
    m = auto.alphabet_size
    kill = auto._kill_rows
    nxt, emit0 = auto._next, auto._emit0
    if kill is not None:
        krows = [kill[s] for s in w]
        n = len(w)
        root = (1 << n) - 1
        triv = auto.trivial_state

        def expand(msk):
            children = []
            images = []
            for x in range(m):
                rem = msk
                nm = msk
                c = x
                while rem:
                    i = rem.bit_length() - 1
                    b = 1 << i
                    rem ^= b
                    f = krows[i][c]
                    if f >= 0:
                        nm ^= b
                        c = f
                children.append(nm)
                images.append(c + 1)
            return children, images

        def decode(msk):
            return tuple(w[i] if msk >> i & 1 else triv for i in range(n))

        return root, expand, decode

    root = w

    def expand(p):
        children = []
        images = []
        for x in range(m):
            c = x
            child = [0] * len(p)
            for i in range(len(p) - 1, -1, -1):
                s = p[i]
                child[i] = nxt[s][c]
                c = emit0[s][c]
            children.append(tuple(child))
            images.append(c + 1)
        return children, images

    return root, expand, lambda p: p


@dataclass(frozen=True)
class SectionClosure:
    """All sections of a state word, grouped by the input length at which
    each first appears."""

    word: tuple
    levels: tuple  # tuple[frozenset[StateWord], ...]; index = first input length
    all_sections: frozenset
    depth: int
    root_recurring: bool  # word reappears as a section at some nonempty input

    @property
    def count(self) -> int:
        return len(self.all_sections)

    def section_count(self, include_root: bool = True) -> int:
        """Closure size; ``include_root=False`` drops the section at the
        empty input unless the word recurs at a longer one."""
        if include_root or self.root_recurring:
            return len(self.all_sections)
        return len(self.all_sections) - 1


def section_closure(auto: Automaton, word: Sequence[int]) -> SectionClosure:
    """Breadth-first closure of ``word`` under sectioning at single letters."""
    root, expand, decode = _closure_engine(auto, word)
    seen = {root}
    levels = [[root]]
    frontier = [root]
    recurring = False
    while frontier:
        new = []
        for node in frontier:
            children, _ = expand(node)
            for ch in children:
                if ch in seen:
                    if ch == root:
                        recurring = True
                else:
                    seen.add(ch)
                    new.append(ch)
        if new:
            levels.append(new)
        frontier = new
    decoded = tuple(frozenset(decode(nd) for nd in lvl) for lvl in levels)
    return SectionClosure(
        word=tuple(check_state_word(auto, word)),
        levels=decoded,
        all_sections=frozenset().union(*decoded),
        depth=len(decoded) - 1,
        root_recurring=recurring,
    )


def _depth_count(auto, word, include_root=True):
    root, expand, _ = _closure_engine(auto, word)
    seen = {root}
    frontier = [root]
    depth = 0
    level = 0
    recurring = False
    while frontier:
        level += 1
        new = []
        for node in frontier:
            children, _ = expand(node)
            for ch in children:
                if ch in seen:
                    if ch == root:
                        recurring = True
                else:
                    seen.add(ch)
                    new.append(ch)
        if not new:
            break
        depth = level
        frontier = new
    count = len(seen) if include_root or recurring else len(seen) - 1
    return depth, count


def word_depth(auto: Automaton, word: Sequence[int]) -> int:
    """Largest input length at which ``word`` still has a new section."""
    return _depth_count(auto, word)[0]


def section_count(auto: Automaton, word: Sequence[int], include_root: bool = True) -> int:
    """Number of distinct sections of ``word``."""
    return _depth_count(auto, word, include_root)[1]


def is_identity(auto: Automaton, word: Sequence[int]) -> bool:
    """Decide whether the word acts as the identity on all inputs: true iff
    every section permutes single letters trivially."""
    if not auto.is_invertible:
        raise AutomatonError("the word problem is decided only for invertible automata")
    root, expand, _ = _closure_engine(auto, word)
    seen = {root}
    frontier = [root]
    while frontier:
        new = []
        for node in frontier:
            children, images = expand(node)
            for x1, img in enumerate(images, 1):
                if img != x1:
                    return False
            for ch in children:
                if ch not in seen:
                    seen.add(ch)
                    new.append(ch)
        frontier = new
    return True


# ---------------------------------------------------------------------------
# Fixed letters.


def common_fixed_letter(auto: Automaton, word: Sequence[int]) -> Optional[int]:
    """Smallest letter fixed by every state of the word, or None."""
    fx = (1 << auto.alphabet_size) - 1
    for s in check_state_word(auto, word):
        fx &= auto._fix_bits[s]
        if not fx:
            return None
    return (fx & -fx).bit_length()


def strip_fixed_letter(letters: Sequence[int], letter: int) -> tuple:
    """Order-preserving removal of every occurrence of ``letter``."""
    return tuple(x for x in letters if x != letter)


def fixed_block_count(auto: Automaton, word: Sequence[int]) -> int:
    """Minimal number of consecutive blocks whose states share a fixed
    letter.  Greedy longest-block is optimal here: any subword of a
    feasible block is feasible."""
    w = check_state_word(auto, word)
    if not w:
        return 0
    count = 1
    fx = (1 << auto.alphabet_size) - 1
    for s in w:
        b = auto._fix_bits[s]
        if not b:
            raise AutomatonError(
                f"state {auto.states[s]!r} fixes no letter; no block partition exists"
            )
        if fx & b:
            fx &= b
        else:
            count += 1
            fx = b
    return count


# ---------------------------------------------------------------------------
# Letter-relabeling symmetries.

_SYMMETRY_SEARCH_BUDGET = 200_000


def automaton_symmetries(auto: Automaton) -> tuple:
    """State permutations arising from machine automorphisms that permute
    letters; includes the identity.  The survey uses these for orbit
    reduction, which preserves depth and section counts because an
    automorphism conjugates the whole action.

    Falls back to the identity alone when the alphabet is too large or the
    search budget is exhausted (the reduction is then simply weaker).
    """
    m = auto.alphabet_size
    k = len(auto.states)
    identity = tuple(range(k))
    if m > 8:
        return (identity,)
    nxt, emit0 = auto._next, auto._emit0
    found = {identity}
    nodes = 0
    for pi in itertools.permutations(range(m)):
        cands = []
        feasible = True
        for s in range(k):
            cs = [
                t
                for t in range(k)
                if all(emit0[t][pi[c]] == pi[emit0[s][c]] for c in range(m))
            ]
            if not cs:
                feasible = False
                break
            cands.append(cs)
        if not feasible:
            continue
        order = sorted(range(k), key=lambda s: len(cands[s]))
        sigma = [None] * k
        used = [False] * k

        def bt(idx):
            nonlocal nodes
            nodes += 1
            if nodes > _SYMMETRY_SEARCH_BUDGET:
                raise _SearchBudget
            if idx == k:
                if all(
                    sigma[nxt[s][c]] == nxt[sigma[s]][pi[c]]
                    for s in range(k)
                    for c in range(m)
                ):
                    found.add(tuple(sigma))
                return
            s = order[idx]
            for t in cands[s]:
                if used[t]:
                    continue
                ok = True
                for c in range(m):
                    u = sigma[nxt[s][c]]
                    if u is not None and u != nxt[t][pi[c]]:
                        ok = False
                        break
                if ok:
                    sigma[s] = t
                    used[t] = True
                    bt(idx + 1)
                    sigma[s] = None
                    used[t] = False

        try:
            bt(0)
        except _SearchBudget:
            return (identity,)
    return tuple(sorted(found))


class _SearchBudget(Exception):
    pass


def _trivial_state_set(auto: Automaton) -> frozenset:
    m = auto.alphabet_size
    return frozenset(
        s
        for s in range(len(auto.states))
        if all(auto._next[s][c] == s and auto._emit0[s][c] == c for c in range(m))
    )


def orbit_count(allowed: Sequence[int], sigmas: Sequence[tuple], length: int) -> int:
    """Number of orbits of length-``length`` words over ``allowed`` states
    under the given permutation group, by averaging fixed-point counts."""
    total = 0
    for sg in sigmas:
        fixed = sum(1 for s in allowed if sg[s] == s)
        total += fixed**length
    return total // len(sigmas)


# ---------------------------------------------------------------------------
# Exhaustive survey of depth / section growth.

WORD_BUDGET = 200_000_000


class BudgetError(RuntimeError):
    """The requested enumeration exceeds the default word budget."""


@dataclass(frozen=True)
class GrowthRow:
    """Maxima over all words of length <= n, plus round bookkeeping."""

    n: int
    depth: int
    depth_witness: tuple
    theta: int
    theta_witness: tuple
    words_examined: int
    orbits: int
    seconds: float


@dataclass(frozen=True)
class GrowthReport:
    rows: tuple
    exclude_trivial: bool
    symmetry: bool
    include_root_section: bool

    def depths(self) -> list:
        return [row.depth for row in self.rows]

    def thetas(self) -> list:
        return [row.theta for row in self.rows]


def _make_stats(kind, m, kill, nxt, emit0, include_root) -> Callable:
    """Closure-statistics function word -> (depth, section count).

    Kept separate from :func:`_closure_engine` so the enumeration's inner
    loop stays free of per-node indirection.
    """
    letters = range(m)
    if kind == "mask":

        def stats(word):
            krows = [kill[s] for s in word]
            full = (1 << len(word)) - 1
            seen = {full}
            add = seen.add
            frontier = [full]
            depth = 0
            level = 0
            recur = False
            while frontier:
                level += 1
                new = []
                push = new.append
                for msk in frontier:
                    for x in letters:
                        rem = msk
                        nm = msk
                        c = x
                        while rem:
                            i = rem.bit_length() - 1
                            b = 1 << i
                            rem ^= b
                            f = krows[i][c]
                            if f >= 0:
                                nm ^= b
                                c = f
                        if nm in seen:
                            if nm == full:
                                recur = True
                        else:
                            add(nm)
                            push(nm)
                if not new:
                    break
                depth = level
                frontier = new
            count = len(seen) if include_root or recur else len(seen) - 1
            return depth, count

        return stats

    def stats(word):
        n = len(word)
        root = tuple(word)
        seen = {root}
        add = seen.add
        frontier = [root]
        depth = 0
        level = 0
        recur = False
        while frontier:
            level += 1
            new = []
            push = new.append
            for p in frontier:
                for x in letters:
                    c = x
                    child = [0] * n
                    for i in range(n - 1, -1, -1):
                        s = p[i]
                        child[i] = nxt[s][c]
                        c = emit0[s][c]
                    t = tuple(child)
                    if t in seen:
                        if t == root:
                            recur = True
                    else:
                        add(t)
                        push(t)
            if not new:
                break
            depth = level
            frontier = new
        count = len(seen) if include_root or recur else len(seen) - 1
        return depth, count

    return stats


def _extend_active(active, s):
    """Filter the symmetries still tying on the extended prefix; None when
    some symmetry maps the extension strictly lower (prefix not canonical)."""
    keep = []
    for sg in active:
        c = sg[s]
        if c < s:
            return None
        if c == s:
            keep.append(sg)
    return keep


def _scan_exact(allowed, stats, prefix, active, n):
    """Visit every canonical word of length exactly ``n`` extending
    ``prefix``; return (examined, best depth + witness, best count + witness)."""
    examined = 0
    best_d = -1
    best_dw = None
    best_t = -1
    best_tw = None
    word = list(prefix)

    def rec(depth, active):
        nonlocal examined, best_d, best_dw, best_t, best_tw
        if depth == n:
            d, t = stats(word)
            examined += 1
            if d > best_d:
                best_d = d
                best_dw = tuple(word)
            if t > best_t:
                best_t = t
                best_tw = tuple(word)
            return
        for s in allowed:
            sub = _extend_active(active, s)
            if sub is None:
                continue
            word.append(s)
            rec(depth + 1, sub)
            word.pop()

    rec(len(prefix), list(active))
    return examined, best_d, best_dw, best_t, best_tw


def _canonical_prefixes(allowed, sigmas, length):
    """Canonical words of ``length`` with the symmetries still tying on them."""
    out = []
    word = []

    def rec(depth, active):
        if depth == length:
            out.append((tuple(word), tuple(active)))
            return
        for s in allowed:
            sub = _extend_active(active, s)
            if sub is None:
                continue
            word.append(s)
            rec(depth + 1, sub)
            word.pop()

    rec(0, list(sigmas))
    return out


def _pool_context():
    # fork keeps workers importable-state-free and REPL-friendly; fall back
    # to the platform default where fork does not exist.
    try:
        return multiprocessing.get_context("fork")
    except ValueError:
        return multiprocessing.get_context()


# Worker-side context for process pools (set once per worker by _pool_init).
_POOL_CTX = None


def _pool_init(payload):
    global _POOL_CTX
    stats = _make_stats(
        payload["kind"],
        payload["m"],
        payload["kill"],
        payload["next"],
        payload["emit0"],
        payload["include_root"],
    )
    _POOL_CTX = (payload["allowed"], stats)


def _pool_scan(task):
    n, prefix, active = task
    allowed, stats = _POOL_CTX
    return _scan_exact(allowed, stats, prefix, active, n)


def _merge_round(results):
    examined = 0
    best_d = -1
    best_dw = None
    best_t = -1
    best_tw = None
    for ex, d, dw, t, tw in results:
        examined += ex
        if d > best_d or (d == best_d and dw is not None and (best_dw is None or dw < best_dw)):
            best_d, best_dw = d, dw
        if t > best_t or (t == best_t and tw is not None and (best_tw is None or tw < best_tw)):
            best_t, best_tw = t, tw
    return examined, best_d, best_dw, best_t, best_tw


def _fingerprint(auto, flags) -> str:
    blob = format_automaton(auto) + json.dumps(flags, sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def _load_checkpoint(path, fingerprint):
    rows = {}
    path = Path(path)
    if not path.exists():
        return rows
    with path.open() as fh:
        lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    if not lines:
        return rows
    header = json.loads(lines[0])
    if header.get("fingerprint") != fingerprint:
        raise AutomatonError(
            f"checkpoint {path} belongs to a different automaton or option set"
        )
    for ln in lines[1:]:
        rec = json.loads(ln)
        rows[rec["n"]] = rec
    return rows


def _append_checkpoint(path, fingerprint, rec):
    path = Path(path)
    is_new = not path.exists() or path.stat().st_size == 0
    with path.open("a") as fh:
        if is_new:
            fh.write(json.dumps({"fingerprint": fingerprint}) + "\n")
        fh.write(json.dumps(rec) + "\n")


def survey(
    auto: Automaton,
    n_max: int,
    *,
    exclude_trivial: bool = True,
    symmetry: bool = True,
    jobs: int = 1,
    long_run: bool = False,
    include_root_section: bool = True,
    checkpoint=None,
    progress: Optional[Callable] = None,
) -> GrowthReport:
    """Exact maxima of depth and section count over all words of length
    <= ``n_max``, one round per length, with witnesses.

    Rounds run over canonical orbit representatives of words without
    do-nothing states unless the reductions are switched off; both
    reductions preserve the maxima.  ``jobs`` > 1 splits each round by
    canonical prefix across a process pool; results are identical for any
    ``jobs``.  ``checkpoint`` names a file that records completed rounds
    and lets an interrupted run resume.  ``progress`` is called with the
    cumulative :class:`GrowthRow` after each round.
    """
    if not auto.is_invertible:
        raise AutomatonError("growth surveys need an invertible automaton")
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    jobs = max(1, int(jobs))

    trivials = _trivial_state_set(auto)
    if exclude_trivial:
        allowed = tuple(s for s in range(len(auto.states)) if s not in trivials)
    else:
        allowed = tuple(range(len(auto.states)))

    total = sum(len(allowed) ** k for k in range(1, n_max + 1))
    if total > WORD_BUDGET and not long_run:
        raise BudgetError(
            f"scanning lengths up to {n_max} covers {total} words before reduction; "
            "set long_run=True (--long-run) to proceed"
        )

    sigmas_all = automaton_symmetries(auto) if symmetry else (tuple(range(len(auto.states))),)
    identity = tuple(range(len(auto.states)))
    sigmas = tuple(sg for sg in sigmas_all if sg != identity)

    # n_max stays out of the fingerprint: per-length rows from a shorter or
    # interrupted run remain valid when the bound is raised.
    flags = {
        "exclude_trivial": exclude_trivial,
        "symmetry": symmetry,
        "include_root_section": include_root_section,
    }
    fingerprint = _fingerprint(auto, flags)
    done = _load_checkpoint(checkpoint, fingerprint) if checkpoint else {}

    kind = "mask" if auto._kill_rows is not None else "tuple"
    stats = _make_stats(
        kind, auto.alphabet_size, auto._kill_rows, auto._next, auto._emit0, include_root_section
    )

    pool = None
    payload = {
        "kind": kind,
        "m": auto.alphabet_size,
        "kill": auto._kill_rows,
        "next": auto._next,
        "emit0": auto._emit0,
        "include_root": include_root_section,
        "allowed": allowed,
    }

    # The empty word has one section (itself) at depth 0; it seeds the
    # cumulative maxima so degenerate machines still report sane rows.
    best_d = (0, 0, ())
    best_t = (1, 0, ())
    rows = []
    try:
        for n in range(1, n_max + 1):
            rec = done.get(n)
            if rec is None:
                t0 = time.perf_counter()
                if jobs > 1 and n >= 2 and allowed:
                    split = _choose_split(allowed, sigmas, jobs, n)
                else:
                    split = 0
                if split == 0:
                    result = _scan_exact(allowed, stats, (), sigmas, n)
                else:
                    if pool is None:
                        pool = _pool_context().Pool(
                            jobs, initializer=_pool_init, initargs=(payload,)
                        )
                    tasks = [
                        (n, prefix, active)
                        for prefix, active in _canonical_prefixes(allowed, sigmas, split)
                    ]
                    chunk = max(1, len(tasks) // (jobs * 4))
                    result = _merge_round(pool.imap_unordered(_pool_scan, tasks, chunk))
                examined, d, dw, t, tw = result
                rec = {
                    "n": n,
                    "depth": d if dw is not None else None,
                    "depth_witness": list(dw) if dw is not None else None,
                    "theta": t if tw is not None else None,
                    "theta_witness": list(tw) if tw is not None else None,
                    "examined": examined,
                    "orbits": orbit_count(allowed, sigmas_all, n),
                    "seconds": time.perf_counter() - t0,
                }
                if checkpoint:
                    _append_checkpoint(checkpoint, fingerprint, rec)
            if rec["depth_witness"] is not None and rec["depth"] > best_d[0]:
                best_d = (rec["depth"], n, tuple(rec["depth_witness"]))
            if rec["theta_witness"] is not None and rec["theta"] > best_t[0]:
                best_t = (rec["theta"], n, tuple(rec["theta_witness"]))
            row = GrowthRow(
                n=n,
                depth=best_d[0],
                depth_witness=best_d[2],
                theta=best_t[0],
                theta_witness=best_t[2],
                words_examined=rec["examined"],
                orbits=rec["orbits"],
                seconds=rec["seconds"],
            )
            rows.append(row)
            if progress:
                progress(row)
    finally:
        if pool is not None:
            pool.terminate()
            pool.join()

    return GrowthReport(
        rows=tuple(rows),
        exclude_trivial=exclude_trivial,
        symmetry=symmetry,
        include_root_section=include_root_section,
    )


def _choose_split(allowed, sigmas, jobs, n):
    target = 8 * jobs
    cap = min(4, n - 1)
    for length in range(1, cap + 1):
        if len(_canonical_prefixes(allowed, sigmas, length)) >= target:
            return length
    return cap


def depth_function(auto: Automaton, n_max: int, **options) -> GrowthReport:
    """Per-length maxima of word depth (see :func:`survey`)."""
    return survey(auto, n_max, **options)


def growth_function(auto: Automaton, n_max: int, **options) -> GrowthReport:
    """Per-length maxima of section count (see :func:`survey`)."""
    return survey(auto, n_max, **options)


def render_growth_csv(report: GrowthReport, auto: Automaton, timings: bool = True) -> str:
    """CSV artifact for a survey; witness words use dotted state names.

    ``timings=False`` leaves the seconds column empty so that repeated
    runs of the same configuration produce byte-identical output.
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        ["n", "depth", "theta", "depth_witness", "theta_witness", "words_examined", "seconds"]
    )
    for row in report.rows:
        writer.writerow(
            [
                row.n,
                row.depth,
                row.theta,
                format_state_word(auto, row.depth_witness),
                format_state_word(auto, row.theta_witness),
                row.words_examined,
                f"{row.seconds:.3f}" if timings else "",
            ]
        )
    return buf.getvalue()


# ---------------------------------------------------------------------------
# Common-fixed-letter thresholds for sections at long inputs.


def strict_log2(n: int) -> int:
    """Least integer strictly greater than log2(n); needs n >= 1."""
    if n < 1:
        raise ValueError("defined for positive integers only")
    return int(n).bit_length()


def threshold_bound(pegs: int, length: int) -> int:
    """Poly-log bound (3*4*...*pegs)^2-style for fixing thresholds:
    product of i^2 for i in 3..pegs, times strict_log2(length)^(pegs-2)."""
    if pegs < 3:
        raise ValueError("needs at least 3 letters")
    c = 1
    for i in range(3, pegs + 1):
        c *= i * i
    return c * strict_log2(length) ** (pegs - 2)


def fixing_threshold(auto: Automaton, word: Sequence[int]) -> Optional[int]:
    """Least t such that every section of ``word`` at every input of length
    >= t has a letter fixed by all its states.  None when sections without
    a common fixed letter recur at unboundedly long inputs.

    Works on the finite closure: the sets of sections reachable at exact
    input lengths L form an eventually periodic sequence; thresholds fall
    out of the last length whose set contains a bad section.
    """
    root, expand, decode = _closure_engine(auto, word)
    full = (1 << auto.alphabet_size) - 1
    children = {}
    good = {}
    stack = [root]
    while stack:
        node = stack.pop()
        if node in children:
            continue
        ch, _ = expand(node)
        children[node] = tuple(ch)
        fx = full
        for s in decode(node):
            fx &= auto._fix_bits[s]
            if not fx:
                break
        good[node] = fx != 0
        stack.extend(ch)

    cur = frozenset([root])
    hist = [cur]
    hist_index = {cur: 0}
    last_bad = -1 if good[root] else 0
    length = 0
    while True:
        nxt_set = frozenset(c for node in cur for c in children[node])
        length += 1
        start = hist_index.get(nxt_set)
        if start is not None:
            if any(not good[node] for j in range(start, length) for node in hist[j]):
                return None
            return last_bad + 1
        if any(not good[node] for node in nxt_set):
            last_bad = length
        hist_index[nxt_set] = length
        hist.append(nxt_set)
        cur = nxt_set


@dataclass(frozen=True)
class ThresholdSample:
    length: int
    word: tuple
    t_star: Optional[int]
    bound: int
    passed: bool


@dataclass(frozen=True)
class ThresholdReport:
    samples: tuple
    seed: int

    @property
    def all_passed(self) -> bool:
        return all(s.passed for s in self.samples)

    def max_by_length(self) -> dict:
        """Empirical maximum threshold per word length (None sorts as failure)."""
        out = {}
        for s in self.samples:
            cur = out.get(s.length, -1)
            val = -2 if s.t_star is None else s.t_star
            if cur == -2 or val == -2:
                out[s.length] = None
            elif val > cur:
                out[s.length] = val
        return {k: (None if v == -2 else v) for k, v in out.items()}


def threshold_survey(
    auto: Automaton,
    lengths: Sequence[int],
    samples: int,
    seed: int = 0,
) -> ThresholdReport:
    """Sample random words of each length over the non-trivial states and
    measure their fixing thresholds against :func:`threshold_bound`."""
    if samples < 1:
        raise ValueError("need at least one sample per length")
    trivials = _trivial_state_set(auto)
    allowed = [s for s in range(len(auto.states)) if s not in trivials]
    if not allowed:
        raise AutomatonError("all states act trivially; nothing to sample")
    rng = random.Random(seed)
    out = []
    for n in lengths:
        if n < 1:
            raise ValueError("word lengths must be positive")
        bound = threshold_bound(auto.alphabet_size, n)
        for _ in range(samples):
            word = tuple(rng.choices(allowed, k=n))
            t_star = fixing_threshold(auto, word)
            out.append(
                ThresholdSample(
                    length=n,
                    word=word,
                    t_star=t_star,
                    bound=bound,
                    passed=t_star is not None and t_star <= bound,
                )
            )
    return ThresholdReport(samples=tuple(out), seed=seed)


def render_threshold_csv(report: ThresholdReport, auto: Automaton) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["n", "word", "t_star", "bound", "pass"])
    for s in report.samples:
        writer.writerow(
            [
                s.length,
                format_state_word(auto, s.word),
                "inf" if s.t_star is None else s.t_star,
                s.bound,
                "true" if s.passed else "false",
            ]
        )
    return buf.getvalue()
