"""Scenario files: everything a verification run needs, in one JSON document.

A scenario pins down the algebra (block dimensions), the time frame (ordered
labels, decimal-string weights, admissible family), one grid of maps per
time, the dynamics (either a local Lagrangian built from duality probes or an
extensional action weight), an optional conjugator, tolerances, caps, and the
seed for suite sampling.  Matrices travel as row-major arrays of [re, im]
pairs; measure weights travel as decimal strings so that no JSON float
parsing is involved in defining the measure.

Loading produces a fully built object graph plus a fingerprint: the SHA-256
of the canonical JSON encoding of the effective config (sorted keys, compact
separators).  Identical config plus seed therefore means identical
fingerprint, and every downstream sample stream is keyed off the seed, which
is what makes verification reports reproducible byte for byte.
"""

from __future__ import annotations

import hashlib
import json
import os
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from typing import Mapping

import numpy as np

from .algebra import Automorphism, ElementaryTensor, NormalFunctional, WStarAlgebra, functional_at
from .dynamics import ActionWeight, resolve_g
from .errors import CapExceededError, ConfigError, EvogridError
from .evolution import GridEvolutionSpace, GridFunction, GridPointMap, TimeFrame, named_contraction
from .lagrangian import Lagrangian, weight_from_lagrangian
from .representation import DENSE_CAP_DEFAULT, PureRepresentation, RepresentationSpace, check_unitary
from .rng import SplitMix64

__all__ = [
    "Tolerances",
    "Scenario",
    "load_scenario",
    "scenario_from_dict",
    "builtin_scenario",
    "BUILTIN_NAMES",
    "canonical_json",
    "encode_matrix",
    "decode_matrix",
    "CAP_ENV_VAR",
]

CAP_ENV_VAR = "EVOGRID_DENSE_CAP"


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def encode_matrix(m) -> list:
    a = np.asarray(m, dtype=np.complex128)
    return [[[float(z.real), float(z.imag)] for z in row] for row in a]


def decode_matrix(obj, context: str) -> np.ndarray:
    try:
        rows = []
        for row in obj:
            rows.append([complex(float(entry[0]), float(entry[1])) for entry in row])
        a = np.array(rows, dtype=np.complex128)
    except (TypeError, ValueError, IndexError):
        raise ConfigError(f"{context}: matrices are row-major arrays of [re, im] pairs") from None
    if a.ndim != 2:
        raise ConfigError(f"{context}: expected a two-dimensional matrix")
    return a


def _expect_mapping(obj, context: str) -> Mapping:
    if not isinstance(obj, Mapping):
        raise ConfigError(f"{context}: expected an object")
    return obj


def _expect_list(obj, context: str) -> list:
    if not isinstance(obj, list):
        raise ConfigError(f"{context}: expected a list")
    return obj


def _expect_int(obj, context: str) -> int:
    if isinstance(obj, bool) or not isinstance(obj, int):
        raise ConfigError(f"{context}: expected an integer")
    return obj


def _decode_block_element(obj, algebra: WStarAlgebra, context: str):
    blocks = _expect_list(obj, context)
    if len(blocks) != algebra.nblocks:
        raise ConfigError(f"{context}: expected {algebra.nblocks} blocks")
    mats = [decode_matrix(b, context) for b in blocks]
    for m, n in zip(mats, algebra.block_dims):
        if m.shape != (n, n):
            raise ConfigError(f"{context}: block shape {m.shape} does not match dimension {n}")
    return mats


@dataclass(frozen=True)
class Tolerances:
    """Default tolerances used by the suites, overridable per scenario."""

    exact: float = 0.0
    conjugated: float = 1e-12
    unitary: float = 1e-10
    dynamics: float = 1e-12

    @classmethod
    def from_config(cls, obj) -> "Tolerances":
        if obj is None:
            return cls()
        table = dict(_expect_mapping(obj, "tolerances"))
        known = {"exact", "conjugated", "unitary", "dynamics"}
        extra = set(table) - known
        if extra:
            raise ConfigError(f"tolerances: unknown keys {sorted(extra)}")
        values = {}
        for key, val in table.items():
            try:
                values[key] = float(val)
            except (TypeError, ValueError):
                raise ConfigError(f"tolerances.{key}: expected a number") from None
        return cls(**values)


@dataclass(frozen=True, eq=False)
class Scenario:
    """Loaded scenario: built objects plus the effective config and fingerprint."""

    name: str
    seed: int
    cap: int
    tolerances: Tolerances
    algebra: WStarAlgebra
    frame: TimeFrame
    space: GridEvolutionSpace
    rep_space: RepresentationSpace
    representation: PureRepresentation
    conjugator: np.ndarray | None
    weight: ActionWeight
    lagrangian: Lagrangian | None
    terms: dict | None
    witness_threshold: float | None
    config: dict
    fingerprint: str


def _parse_frame(cfg: Mapping) -> TimeFrame:
    frame_cfg = _expect_mapping(cfg.get("time_frame"), "time_frame")
    raw_times = _expect_list(frame_cfg.get("times"), "time_frame.times")
    times = tuple(str(t) for t in raw_times)
    if len(set(times)) != len(times) or not times:
        raise ConfigError("time_frame.times must be nonempty and distinct")
    weights_cfg = _expect_mapping(frame_cfg.get("weights"), "time_frame.weights")
    weights = []
    for t in times:
        if t not in weights_cfg:
            raise ConfigError(f"time_frame.weights: missing weight for time {t!r}")
        raw = weights_cfg[t]
        if not isinstance(raw, str):
            raise ConfigError(f"time_frame.weights[{t!r}]: weights are decimal strings, got {raw!r}")
        try:
            weights.append(float(Decimal(raw)))
        except InvalidOperation:
            raise ConfigError(f"time_frame.weights[{t!r}]: invalid decimal string {raw!r}") from None
    extra = set(weights_cfg) - set(times)
    if extra:
        raise ConfigError(f"time_frame.weights: unknown time labels {sorted(extra)}")
    sigma_cfg = frame_cfg.get("sigma0", "all")
    if sigma_cfg == "all":
        sigma0 = None
    else:
        subsets = _expect_list(sigma_cfg, "time_frame.sigma0")
        sigma0 = tuple(frozenset(str(t) for t in _expect_list(s, "time_frame.sigma0[]")) for s in subsets)
    try:
        return TimeFrame(times, tuple(weights), sigma0)
    except EvogridError as exc:
        raise ConfigError(f"time_frame: {exc}") from None


def _parse_grid(entry, algebra: WStarAlgebra, t: str) -> tuple[GridPointMap, ...]:
    spec = _expect_mapping(entry, f"grids[{t!r}]")
    kinds = [k for k in ("unitaries", "haar", "named") if k in spec]
    if len(kinds) != 1:
        raise ConfigError(f"grids[{t!r}]: exactly one of unitaries/haar/named is required")
    kind = kinds[0]
    maps: list[GridPointMap] = []
    if kind == "unitaries":
        for i, entry_cfg in enumerate(_expect_list(spec["unitaries"], f"grids[{t!r}].unitaries")):
            ctx = f"grids[{t!r}].unitaries[{i}]"
            if isinstance(entry_cfg, Mapping):
                blocks = _decode_block_element(entry_cfg.get("blocks"), algebra, ctx)
                perm = entry_cfg.get("perm")
                perm = tuple(_expect_int(p, f"{ctx}.perm") for p in perm) if perm is not None else None
            else:
                blocks = _decode_block_element(entry_cfg, algebra, ctx)
                perm = None
            try:
                alpha = Automorphism.conjugation(algebra, blocks, perm)
            except EvogridError as exc:
                raise ConfigError(f"{ctx}: {exc}") from None
            maps.append(GridPointMap.from_automorphism(alpha))
    elif kind == "haar":
        haar = _expect_mapping(spec["haar"], f"grids[{t!r}].haar")
        count = _expect_int(haar.get("count"), f"grids[{t!r}].haar.count")
        seed = _expect_int(haar.get("seed"), f"grids[{t!r}].haar.seed")
        if count < 1:
            raise ConfigError(f"grids[{t!r}].haar.count must be at least 1")
        rng = SplitMix64(seed)
        for _ in range(count):
            maps.append(GridPointMap.from_automorphism(Automorphism.haar(algebra, rng)))
    else:
        for name in _expect_list(spec["named"], f"grids[{t!r}].named"):
            try:
                maps.append(named_contraction(str(name), algebra))
            except EvogridError as exc:
                raise ConfigError(f"grids[{t!r}].named: {exc}") from None
    return tuple(maps)


def _parse_probe(obj, algebra: WStarAlgebra, context: str) -> ElementaryTensor:
    spec = _expect_mapping(obj, context)
    pairs = []
    for i, pair_cfg in enumerate(_expect_list(spec.get("pairs"), f"{context}.pairs")):
        pair = _expect_mapping(pair_cfg, f"{context}.pairs[{i}]")
        element = algebra.element(_decode_block_element(pair.get("element"), algebra, f"{context}.pairs[{i}].element"))
        density = NormalFunctional(
            algebra,
            tuple(_decode_block_element(pair.get("density"), algebra, f"{context}.pairs[{i}].density")),
        )
        pairs.append((element, density))
    if not pairs:
        raise ConfigError(f"{context}.pairs must be nonempty")
    return ElementaryTensor(algebra, tuple(pairs))


def _parse_reference(obj, algebra: WStarAlgebra, space: GridEvolutionSpace, t: str, context: str) -> GridPointMap:
    spec = _expect_mapping(obj, context)
    kinds = [k for k in ("grid_index", "named", "unitary") if k in spec]
    if len(kinds) != 1:
        raise ConfigError(f"{context}: exactly one of grid_index/named/unitary is required")
    kind = kinds[0]
    try:
        if kind == "grid_index":
            return space.map_at(t, _expect_int(spec["grid_index"], f"{context}.grid_index"))
        if kind == "named":
            return named_contraction(str(spec["named"]), algebra)
        blocks = _decode_block_element(spec["unitary"], algebra, f"{context}.unitary")
        return GridPointMap.from_automorphism(Automorphism.conjugation(algebra, blocks))
    except ConfigError:
        raise
    except EvogridError as exc:
        raise ConfigError(f"{context}: {exc}") from None


def _parse_dynamics(cfg: Mapping, algebra: WStarAlgebra, space: GridEvolutionSpace):
    dyn = _expect_mapping(cfg.get("dynamics"), "dynamics")
    kind = dyn.get("kind")
    if kind == "lagrangian":
        terms_cfg = _expect_mapping(dyn.get("terms"), "dynamics.terms")
        times = space.frame.times
        if set(terms_cfg) != set(times):
            raise ConfigError("dynamics.terms must name exactly the frame's time labels")
        probes, post_maps, references = {}, {}, {}
        for t in times:
            term = _expect_mapping(terms_cfg[t], f"dynamics.terms[{t!r}]")
            probes[t] = _parse_probe(term.get("probe"), algebra, f"dynamics.terms[{t!r}].probe")
            try:
                post_maps[t] = resolve_g(term.get("post_map"))
            except EvogridError as exc:
                raise ConfigError(f"dynamics.terms[{t!r}].post_map: {exc}") from None
            references[t] = _parse_reference(
                term.get("reference"), algebra, space, t, f"dynamics.terms[{t!r}].reference"
            )
        bases = {t: functional_at(probes[t], references[t]) for t in times}

        def term_fn(t, index, grid_map):
            value = functional_at(probes[t], grid_map) - bases[t]
            return post_maps[t](value)

        lagrangian = Lagrangian.from_local(space, term_fn)
        try:
            weight = weight_from_lagrangian(lagrangian)
        except EvogridError as exc:
            raise ConfigError(f"dynamics: {exc}") from None
        terms = {"probes": probes, "post_maps": post_maps, "references": references}
        return weight, lagrangian, terms
    if kind == "action_weight":
        entries = _expect_list(dyn.get("weights"), "dynamics.weights")
        functions = {}
        for i, entry in enumerate(entries):
            item = _expect_mapping(entry, f"dynamics.weights[{i}]")
            subset = frozenset(str(t) for t in _expect_list(item.get("times"), f"dynamics.weights[{i}].times"))
            values = _expect_list(item.get("values"), f"dynamics.weights[{i}].values")
            try:
                vec = np.array([complex(float(v[0]), float(v[1])) for v in values], dtype=np.complex128)
            except (TypeError, ValueError, IndexError):
                raise ConfigError(f"dynamics.weights[{i}].values: expected [re, im] pairs") from None
            if subset in functions:
                raise ConfigError(f"dynamics.weights[{i}]: duplicate subset")
            try:
                functions[subset] = GridFunction(space, subset, vec)
            except EvogridError as exc:
                raise ConfigError(f"dynamics.weights[{i}]: {exc}") from None
        try:
            weight = ActionWeight(space, functions)
        except EvogridError as exc:
            raise ConfigError(f"dynamics.weights: {exc}") from None
        return weight, None, None
    raise ConfigError("dynamics.kind must be 'lagrangian' or 'action_weight'")


def _parse_conjugator(cfg: Mapping, dimension: int) -> np.ndarray | None:
    obj = cfg.get("conjugator")
    if obj is None:
        return None
    spec = _expect_mapping(obj, "conjugator")
    kinds = [k for k in ("haar", "matrix") if k in spec]
    if len(kinds) != 1:
        raise ConfigError("conjugator: exactly one of haar/matrix is required")
    if kinds[0] == "haar":
        haar = _expect_mapping(spec["haar"], "conjugator.haar")
        seed = _expect_int(haar.get("seed"), "conjugator.haar.seed")
        u = SplitMix64(seed).haar_unitary(dimension)
    else:
        u = decode_matrix(spec["matrix"], "conjugator.matrix")
        if u.shape != (dimension, dimension):
            raise ConfigError(f"conjugator.matrix must be {dimension}x{dimension}")
    try:
        check_unitary(u)
    except EvogridError as exc:
        raise ConfigError(f"conjugator: {exc}") from None
    return u


def scenario_from_dict(cfg: dict, seed_override: int | None = None) -> Scenario:
    """Build the object graph from a config dict; see the module docstring."""
    cfg = _expect_mapping(cfg, "scenario")
    known = {
        "name", "seed", "cap", "tolerances", "algebra", "time_frame",
        "grids", "dynamics", "conjugator", "witness_threshold",
    }
    extra = set(cfg) - known
    if extra:
        raise ConfigError(f"scenario: unknown keys {sorted(extra)}")

    effective = json.loads(canonical_json(dict(cfg)))
    if seed_override is not None:
        effective["seed"] = int(seed_override)
    name = str(effective.get("name", "scenario"))
    seed = _expect_int(effective.get("seed", 0), "seed")

    cap = effective.get("cap", DENSE_CAP_DEFAULT)
    cap = _expect_int(cap, "cap")
    env_cap = os.environ.get(CAP_ENV_VAR)
    if env_cap is not None:
        try:
            cap = int(env_cap)
        except ValueError:
            raise ConfigError(f"{CAP_ENV_VAR} must be an integer, got {env_cap!r}") from None

    tolerances = Tolerances.from_config(effective.get("tolerances"))

    algebra_cfg = _expect_mapping(effective.get("algebra"), "algebra")
    blocks = _expect_list(algebra_cfg.get("blocks"), "algebra.blocks")
    try:
        algebra = WStarAlgebra(tuple(_expect_int(b, "algebra.blocks[]") for b in blocks))
    except EvogridError as exc:
        raise ConfigError(f"algebra: {exc}") from None

    frame = _parse_frame(effective)

    grids_cfg = _expect_mapping(effective.get("grids"), "grids")
    if set(grids_cfg) != set(frame.times):
        raise ConfigError("grids must name exactly the frame's time labels")
    try:
        space = GridEvolutionSpace(frame, tuple(_parse_grid(grids_cfg[t], algebra, t) for t in frame.times))
    except ConfigError:
        raise
    except EvogridError as exc:
        raise ConfigError(f"grids: {exc}") from None

    try:
        rep_space = RepresentationSpace(space, cap=cap)
    except CapExceededError:
        raise
    representation = PureRepresentation(rep_space)

    weight, lagrangian, terms = _parse_dynamics(effective, algebra, space)
    conjugator = _parse_conjugator(effective, rep_space.dimension)

    threshold = effective.get("witness_threshold")
    if threshold is not None:
        try:
            threshold = float(threshold)
        except (TypeError, ValueError):
            raise ConfigError("witness_threshold must be a number") from None

    return Scenario(
        name=name,
        seed=seed,
        cap=cap,
        tolerances=tolerances,
        algebra=algebra,
        frame=frame,
        space=space,
        rep_space=rep_space,
        representation=representation,
        conjugator=conjugator,
        weight=weight,
        lagrangian=lagrangian,
        terms=terms,
        witness_threshold=threshold,
        config=effective,
        fingerprint=hashlib.sha256(canonical_json(effective).encode("ascii")).hexdigest(),
    )


def load_scenario(source, seed_override: int | None = None) -> Scenario:
    """Load from a file path, a builtin name ('demo', 'witness'), or a dict."""
    if isinstance(source, dict):
        return scenario_from_dict(source, seed_override)
    text = str(source)
    if text in BUILTIN_NAMES:
        return scenario_from_dict(builtin_scenario(text), seed_override)
    try:
        with open(text, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"scenario file is not valid JSON: {exc}") from None
    return scenario_from_dict(cfg, seed_override)


# -- builtin scenarios ----------------------------------------------------


def _demo_scenario() -> dict:
    i2 = [[1, 0], [0, 1]]
    return {
        "name": "demo",
        "seed": 42,
        "cap": 4096,
        "algebra": {"blocks": [2, 3]},
        "time_frame": {
            "times": ["1", "2", "3"],
            "weights": {"1": "0.5", "2": "2.0", "3": "0"},
            "sigma0": "all",
        },
        "grids": {
            "1": {"haar": {"count": 2, "seed": 11}},
            "2": {"haar": {"count": 3, "seed": 22}},
            "3": {"named": ["identity", "trace_average"]},
        },
        "dynamics": {
            "kind": "lagrangian",
            "terms": {
                "1": {
                    "probe": {
                        "pairs": [
                            {
                                "element": [
                                    encode_matrix([[1, 0], [0, -1]]),
                                    encode_matrix([[1, 0, 0], [0, 0, 0], [0, 0, -1]]),
                                ],
                                "density": [
                                    encode_matrix([[0.5, 0.1j], [-0.1j, -0.25]]),
                                    encode_matrix([[0.25, 0, 0], [0, 0.5, 0], [0, 0, -0.5]]),
                                ],
                            }
                        ]
                    },
                    "post_map": "abs2",
                    "reference": {"grid_index": 0},
                },
                "2": {
                    "probe": {
                        "pairs": [
                            {
                                "element": [
                                    encode_matrix([[0, 1], [1, 0]]),
                                    encode_matrix([[0, 1, 0], [0, 0, 1], [1, 0, 0]]),
                                ],
                                "density": [
                                    encode_matrix([[0.25, 0], [0, 0.75]]),
                                    encode_matrix([[1 / 3, 0, 0], [0, 1 / 3, 0], [0, 0, 1 / 3]]),
                                ],
                            }
                        ]
                    },
                    "post_map": "re",
                    "reference": {"grid_index": 1},
                },
                "3": {
                    "probe": {
                        "pairs": [
                            {
                                "element": [
                                    encode_matrix([[1, 0], [0, 0]]),
                                    encode_matrix([[1, 0, 0], [0, 1, 0], [0, 0, 0]]),
                                ],
                                "density": [
                                    encode_matrix([[0.5, 0], [0, 0.5]]),
                                    encode_matrix([[0.2, 0, 0], [0, 0.3, 0], [0, 0, 0.5]]),
                                ],
                            }
                        ]
                    },
                    "post_map": "abs",
                    "reference": {"grid_index": 0},
                },
            },
        },
        "conjugator": {"haar": {"seed": 91}},
    }


def _witness_scenario() -> dict:
    s = 2.0 ** -0.5
    return {
        "name": "witness",
        "seed": 7,
        "cap": 4096,
        "algebra": {"blocks": [2]},
        "time_frame": {
            "times": ["1"],
            "weights": {"1": "1"},
            "sigma0": "all",
        },
        "grids": {"1": {"named": ["identity", "trace_average"]}},
        "dynamics": {
            "kind": "action_weight",
            "weights": [
                {"times": [], "values": [[1.0, 0.0]]},
                {"times": ["1"], "values": [[1.0, 0.0], [-1.0, 0.0]]},
            ],
        },
        "conjugator": {"matrix": [[[s, 0.0], [s, 0.0]], [[s, 0.0], [-s, 0.0]]]},
        "witness_threshold": 0.1,
    }


BUILTIN_NAMES = ("demo", "witness")


def builtin_scenario(name: str) -> dict:
    if name == "demo":
        return _demo_scenario()
    if name == "witness":
        return _witness_scenario()
    raise ConfigError(f"unknown builtin scenario {name!r}")
