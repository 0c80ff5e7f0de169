"""Problem data: instances, validation, synthetic generation, JSON I/O.

All money values are integer cents, all demand/return quantities are
integer units.  Matrices are products x periods (K x T).
"""

import json

import numpy as np

_COST_FIELDS = (
    "setup_cost_m",
    "setup_cost_r",
    "holding_cost_m",
    "holding_cost_r",
    "unit_cost_m",
    "unit_cost_r",
)

_REQUIRED_KEYS = ("products", "periods", "demand", "returns") + _COST_FIELDS[:4]
_OPTIONAL_KEYS = _COST_FIELDS[4:]


class InstanceFormatError(ValueError):
    """Raised when serialized instance data is malformed or invalid."""


class Instance:
    """Immutable problem data for one multi-item lot-sizing instance.

    Attributes:
        products: number of products K
        periods: planning horizon T
        demand: (K, T) int64, units demanded per product and period
        returns: (K, T) int64, returned units per product and period
        setup_cost_m / setup_cost_r: (K,) int64 cents per batch
        holding_cost_m / holding_cost_r: (K,) int64 cents per unit-period
        unit_cost_m / unit_cost_r: (K,) int64 cents per produced unit
    """

    __slots__ = ("products", "periods", "demand", "returns") + _COST_FIELDS

    def __init__(self, products, periods, demand, returns,
                 setup_cost_m, setup_cost_r, holding_cost_m, holding_cost_r,
                 unit_cost_m=None, unit_cost_r=None):
        self.products = int(products)
        self.periods = int(periods)
        self.demand = np.array(demand, dtype=np.int64, order="C")
        self.returns = np.array(returns, dtype=np.int64, order="C")
        if unit_cost_m is None:
            unit_cost_m = np.zeros(self.products, dtype=np.int64)
        if unit_cost_r is None:
            unit_cost_r = np.zeros(self.products, dtype=np.int64)
        self.setup_cost_m = np.array(setup_cost_m, dtype=np.int64)
        self.setup_cost_r = np.array(setup_cost_r, dtype=np.int64)
        self.holding_cost_m = np.array(holding_cost_m, dtype=np.int64)
        self.holding_cost_r = np.array(holding_cost_r, dtype=np.int64)
        self.unit_cost_m = np.array(unit_cost_m, dtype=np.int64)
        self.unit_cost_r = np.array(unit_cost_r, dtype=np.int64)

    def __eq__(self, other):
        if not isinstance(other, Instance):
            return NotImplemented
        if (self.products, self.periods) != (other.products, other.periods):
            return False
        return all(
            np.array_equal(getattr(self, f), getattr(other, f))
            for f in ("demand", "returns") + _COST_FIELDS
        )

    def __repr__(self):
        return f"Instance(products={self.products}, periods={self.periods})"


class GeneratorConfig:
    """Parameters for synthetic instance generation.

    Cost ranges are inclusive (lo, hi) pairs in integer cents.
    ``return_ratio`` bounds each cell's returns to floor(ratio * demand).
    """

    __slots__ = ("products", "periods", "demand_max", "return_ratio",
                 "setup_cost_range", "holding_cost_range", "unit_cost_range",
                 "seed")

    def __init__(self, products, periods, demand_max=100, return_ratio=0.5,
                 setup_cost_range=(50_000, 200_000),
                 holding_cost_range=(100, 500),
                 unit_cost_range=(0, 0), seed=0):
        self.products = int(products)
        self.periods = int(periods)
        self.demand_max = int(demand_max)
        self.return_ratio = float(return_ratio)
        self.setup_cost_range = (int(setup_cost_range[0]), int(setup_cost_range[1]))
        self.holding_cost_range = (int(holding_cost_range[0]), int(holding_cost_range[1]))
        self.unit_cost_range = (int(unit_cost_range[0]), int(unit_cost_range[1]))
        self.seed = int(seed)
        self._validate()

    def _validate(self):
        if self.products < 1:
            raise ValueError("products must be >= 1")
        if self.periods < 1:
            raise ValueError("periods must be >= 1")
        if self.demand_max < 0:
            raise ValueError("demand_max must be >= 0")
        if not 0.0 <= self.return_ratio <= 1.0:
            raise ValueError("return_ratio must be in [0, 1]")
        for name in ("setup_cost_range", "holding_cost_range", "unit_cost_range"):
            lo, hi = getattr(self, name)
            if lo < 0 or hi < lo:
                raise ValueError(f"{name} must satisfy 0 <= lo <= hi, got ({lo}, {hi})")


def generate_instance(config: GeneratorConfig) -> Instance:
    """Draw a random instance; a pure function of ``config`` (seed included).

    Demand cells are uniform integers in {0..demand_max} and each product
    gets at least one positive-demand period (rows are redrawn) unless
    demand_max is 0.  Returns are uniform in {0..floor(ratio * demand)}
    per cell, so returns never exceed demand.
    """
    seed = config.seed & 0xFFFFFFFFFFFFFFFF
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    K, T = config.products, config.periods

    demand = rng.integers(0, config.demand_max + 1, size=(K, T), dtype=np.int64)
    if config.demand_max > 0:
        dead = np.flatnonzero(demand.sum(axis=1) == 0)
        while dead.size:
            demand[dead] = rng.integers(0, config.demand_max + 1,
                                        size=(dead.size, T), dtype=np.int64)
            dead = dead[demand[dead].sum(axis=1) == 0]

    bound = np.floor(config.return_ratio * demand + 1e-12).astype(np.int64)
    returns = rng.integers(0, bound + 1, dtype=np.int64)

    def draw(lo_hi):
        lo, hi = lo_hi
        return rng.integers(lo, hi + 1, size=K, dtype=np.int64)

    return Instance(
        products=K,
        periods=T,
        demand=demand,
        returns=returns,
        setup_cost_m=draw(config.setup_cost_range),
        setup_cost_r=draw(config.setup_cost_range),
        holding_cost_m=draw(config.holding_cost_range),
        holding_cost_r=draw(config.holding_cost_range),
        unit_cost_m=draw(config.unit_cost_range),
        unit_cost_r=draw(config.unit_cost_range),
    )


def validate_instance(inst: Instance) -> list[str]:
    """Return all dimension/negativity violations; empty list means valid."""
    violations = []
    K, T = inst.products, inst.periods
    if K < 1:
        violations.append("products must be >= 1")
    if T < 1:
        violations.append("periods must be >= 1")
    for name in ("demand", "returns"):
        mat = getattr(inst, name)
        if mat.shape != (K, T):
            violations.append(f"{name} must be {K}x{T}, got shape {mat.shape}")
        elif (mat < 0).any():
            violations.append(f"{name} contains negative entries")
    for name in _COST_FIELDS:
        vec = getattr(inst, name)
        if vec.shape != (K,):
            violations.append(f"{name} must have length {K}, got shape {vec.shape}")
        elif (vec < 0).any():
            violations.append(f"{name} contains negative entries")
    return violations


def _check_int_matrix(value, name, rows, cols):
    if not isinstance(value, list) or len(value) != rows:
        raise InstanceFormatError(f"{name}: expected {rows} rows")
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != cols:
            raise InstanceFormatError(f"{name}[{i}]: expected {cols} columns")
        for j, x in enumerate(row):
            if isinstance(x, bool) or not isinstance(x, int):
                raise InstanceFormatError(f"{name}[{i}][{j}]: expected an integer")


def _check_int_vector(value, name, length):
    if not isinstance(value, list) or len(value) != length:
        raise InstanceFormatError(f"{name}: expected a list of length {length}")
    for j, x in enumerate(value):
        if isinstance(x, bool) or not isinstance(x, int):
            raise InstanceFormatError(f"{name}[{j}]: expected an integer")


def parse_instance(text: str) -> Instance:
    """Parse the JSON instance format; inverse of :func:`serialize_instance`.

    Raises InstanceFormatError on malformed syntax, schema violations
    (unknown/missing fields, wrong shapes or types) and on instances that
    fail :func:`validate_instance`.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"malformed JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InstanceFormatError("top-level value must be an object")

    allowed = set(_REQUIRED_KEYS) | set(_OPTIONAL_KEYS)
    for key in data:
        if key not in allowed:
            raise InstanceFormatError(f"unknown field {key!r}")
    for key in _REQUIRED_KEYS:
        if key not in data:
            raise InstanceFormatError(f"missing field {key!r}")

    for key in ("products", "periods"):
        if isinstance(data[key], bool) or not isinstance(data[key], int):
            raise InstanceFormatError(f"{key}: expected an integer")
    K, T = data["products"], data["periods"]
    if K < 1 or T < 1:
        raise InstanceFormatError("products and periods must be >= 1")

    _check_int_matrix(data["demand"], "demand", K, T)
    _check_int_matrix(data["returns"], "returns", K, T)
    for key in _COST_FIELDS:
        if key in data:
            _check_int_vector(data[key], key, K)

    inst = Instance(
        products=K,
        periods=T,
        demand=data["demand"],
        returns=data["returns"],
        setup_cost_m=data["setup_cost_m"],
        setup_cost_r=data["setup_cost_r"],
        holding_cost_m=data["holding_cost_m"],
        holding_cost_r=data["holding_cost_r"],
        unit_cost_m=data.get("unit_cost_m"),
        unit_cost_r=data.get("unit_cost_r"),
    )
    violations = validate_instance(inst)
    if violations:
        raise InstanceFormatError("; ".join(violations))
    return inst


def serialize_instance(inst: Instance) -> str:
    """Serialize to the JSON instance format (UTF-8 text)."""
    payload = {
        "products": inst.products,
        "periods": inst.periods,
        "demand": inst.demand.tolist(),
        "returns": inst.returns.tolist(),
    }
    for key in _COST_FIELDS:
        payload[key] = getattr(inst, key).tolist()
    return json.dumps(payload)
