"""Run configuration: defaults, ``key = value`` files, and command-line overrides."""
from __future__ import annotations

from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path

from .errors import ConfigError
from .params import (BoundaryParams, BulkParams, DerivedBoundary, derive_bare_from_pm,
                     derive_pm_from_bare)

DEFAULT_NU = 3.7
DEFAULT_P_PLUS = 0.8
DEFAULT_P_MINUS = 1.3


@dataclass(frozen=True)
class Grid:
    start: float
    stop: float
    step: float

    @classmethod
    def parse(cls, text: str) -> "Grid":
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"grid must look like 'min:max:step', got {text!r}")
        try:
            start, stop, step = (float(p) for p in parts)
        except ValueError as exc:
            raise ConfigError(f"grid entries must be numbers, got {text!r}") from exc
        if step <= 0 or stop < start:
            raise ConfigError(f"grid needs step > 0 and max >= min, got {text!r}")
        return cls(start, stop, step)

    def points(self) -> list[float]:
        count = int(round((self.stop - self.start) / self.step))
        if self.start + count * self.step > self.stop + 1e-12 * max(1.0, abs(self.stop)):
            count -= 1
        return [self.start + k * self.step for k in range(count + 1)]

    def __str__(self) -> str:
        return f"{self.start!r}:{self.stop!r}:{self.step!r}"


@dataclass(frozen=True)
class RunConfig:
    nu: float = DEFAULT_NU
    p_plus: float | None = None
    p_minus: float | None = None
    xi: complex | None = None
    kappa: complex | None = None
    theta: float = 0.0
    n_sites: int | None = None
    m_roots: int | None = None
    algebra_tol: float = 1e-12
    commutator_tol: float = 1e-10
    bae_tol: float = 1e-8
    amp_tol: float = 1e-8
    charge_tol: float = 1e-10
    density_tol: float = 0.02
    grid: Grid = field(default_factory=lambda: Grid(0.0, 2.0, 0.25))
    seed: int = 0
    n_points: int = 100
    out: str | None = None
    format: str = "json"

    def __post_init__(self):
        try:
            BulkParams(self.nu)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        pm_form = self.p_plus is not None or self.p_minus is not None
        bare_form = self.xi is not None or self.kappa is not None
        if pm_form and bare_form:
            raise ConfigError("give either (p_plus, p_minus) or (xi, kappa), not both")
        if pm_form and (self.p_plus is None or self.p_minus is None):
            raise ConfigError("p_plus and p_minus must be given together")
        if bare_form and (self.xi is None or self.kappa is None):
            raise ConfigError("xi and kappa must be given together")
        for name in ("algebra_tol", "commutator_tol", "bae_tol", "amp_tol", "charge_tol", "density_tol"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if self.n_sites is not None and self.n_sites < 1:
            raise ConfigError(f"n_sites must be positive, got {self.n_sites}")
        if self.format not in ("json", "csv"):
            raise ConfigError(f"format must be json or csv, got {self.format!r}")
        if self.n_points < 1:
            raise ConfigError(f"n_points must be positive, got {self.n_points}")

    @property
    def bulk(self) -> BulkParams:
        return BulkParams(self.nu)

    def resolved(self) -> "RunConfig":
        """Fill in the default boundary when neither form was given."""
        if self.p_plus is None and self.xi is None:
            return replace(self, p_plus=DEFAULT_P_PLUS, p_minus=DEFAULT_P_MINUS)
        return self

    def boundary(self) -> tuple[BoundaryParams, DerivedBoundary]:
        cfg = self.resolved()
        if cfg.p_plus is not None:
            derived = DerivedBoundary.from_pm(cfg.p_plus, cfg.p_minus)
            try:
                bare = derive_bare_from_pm(cfg.p_plus, cfg.p_minus, self.bulk, cfg.theta)
            except ZeroDivisionError as exc:
                raise ConfigError(str(exc)) from exc
            return bare, derived
        try:
            bare = BoundaryParams(complex(cfg.xi), complex(cfg.kappa), cfg.theta)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        return bare, derive_pm_from_bare(bare, self.bulk)

    def as_record(self) -> dict:
        out = {}
        for key, value in asdict(self.resolved()).items():
            if isinstance(value, complex):
                value = {"re": value.real, "im": value.imag}
            elif isinstance(value, dict) and set(value) == {"start", "stop", "step"}:
                value = str(self.grid)
            out[key] = value
        return out


_FLOAT_KEYS = {"nu", "p_plus", "p_minus", "theta", "algebra_tol", "commutator_tol", "bae_tol",
               "amp_tol", "charge_tol", "density_tol", "xi_re", "xi_im", "kappa_re", "kappa_im"}
_INT_KEYS = {"n_sites", "m_roots", "seed", "n_points"}
_STR_KEYS = {"out", "format", "grid"}


def parse_config_text(text: str, source: str = "<config>") -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{source}:{lineno}: expected 'key = value', got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _FLOAT_KEYS | _INT_KEYS | _STR_KEYS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        try:
            if key in _FLOAT_KEYS:
                values[key] = float(value)
            elif key in _INT_KEYS:
                values[key] = int(value)
            else:
                values[key] = value
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for {key}: {value!r}") from exc
    return values


def load_config_file(path: str | Path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config_text(text, str(path))


def build_config(values: dict) -> RunConfig:
    """Assemble a :class:`RunConfig` from flat key/value pairs."""
    values = dict(values)
    kwargs = {}
    xi_parts = [values.pop(k, None) for k in ("xi_re", "xi_im")]
    kappa_parts = [values.pop(k, None) for k in ("kappa_re", "kappa_im")]
    if any(v is not None for v in xi_parts):
        kwargs["xi"] = complex(xi_parts[0] or 0.0, xi_parts[1] or 0.0)
    if any(v is not None for v in kappa_parts):
        kwargs["kappa"] = complex(kappa_parts[0] or 0.0, kappa_parts[1] or 0.0)
    if "grid" in values:
        kwargs["grid"] = Grid.parse(values.pop("grid"))
    known = {f.name for f in fields(RunConfig)}
    for key, value in values.items():
        if key not in known:
            raise ConfigError(f"unknown setting {key!r}")
        kwargs[key] = value
    return RunConfig(**kwargs)
