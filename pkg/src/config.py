"""
Experiment configuration

Configs are JSON documents loaded into nested dataclasses. Unknown keys are
errors (the message names the dotted key path and its line), so a typo in a
penalty or a rank can never be silently ignored.

Randomness flows from one root seed split into four component seeds
(ofdm, noise, init, sketch) with numpy's SeedSequence; explicit component
seeds under "seeds" override the split.
"""

import dataclasses
import hashlib
import json
import typing
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from .errors import ConfigError
from .identification import SOLVER_KINDS, SolverConfig
from .models import check_ranks
from .signals import OfdmConfig, ReferencePa

SEED_COMPONENTS = ('ofdm', 'noise', 'init', 'sketch')


@dataclass
class OfdmSection:
    fft_len: int = 2048
    active_subcarriers: int = 1584
    cyclic_prefix_len: int = 72
    num_symbols: int = 28
    rms: float = 0.3


@dataclass
class PaSection:
    memory_depth: int = 11
    order: int = 5
    snr_db: Optional[float] = 50.0


@dataclass
class WindowConfig:
    t0: int = 100
    n: int = 1024


@dataclass
class WindowsSection:
    train: WindowConfig = field(default_factory=lambda: WindowConfig(100, 1024))
    test: WindowConfig = field(default_factory=lambda: WindowConfig(20, 30639))


@dataclass
class ProjectionSection:
    m2: int = 5
    p: int = 3
    oversample: int = 5
    power: int = 2


@dataclass
class SeedsSection:
    ofdm: Optional[int] = None
    noise: Optional[int] = None
    init: Optional[int] = None
    sketch: Optional[int] = None


@dataclass
class ModelSpec:
    """One trainable model: solver, GMP dims, ranks and solver settings"""
    name: str = ''
    solver: str = 'gmp-ls'
    dims: List[int] = field(default_factory=lambda: [11, 10, 8])
    ranks: List[int] = field(default_factory=list)
    gamma: float = 1e-4
    iterations: int = 10
    init_scale: float = 0.1
    rp_als: bool = False

    @property
    def label(self) -> str:
        if self.name:
            return self.name
        suffix = 'x'.join(str(r) for r in self.ranks)
        base = f"{self.solver}_r{suffix}" if suffix else self.solver
        return f"rp-{base}" if self.rp_als else base


@dataclass
class BenchSection:
    repeats: int = 5
    dims: List[List[int]] = field(default_factory=lambda: [[11, 10, 8], [10, 8, 6]])
    gammas: List[float] = field(default_factory=lambda: [1e-5, 1e-4, 1e-3, 1e-2, 1e-1])
    gamma_solvers: List[str] = field(default_factory=lambda: ['gmp-ls', 'gmp-lasso'])
    lasso_iterations: int = 500
    ranks: List[int] = field(default_factory=lambda: [1, 2, 3, 4, 5])
    rank_iterations: int = 10
    rp_seeds: int = 10


@dataclass
class OutputSection:
    dir: str = 'outputs'
    signal_format: str = 'csv'


@dataclass
class ExperimentConfig:
    seed: int = 2024
    seeds: SeedsSection = field(default_factory=SeedsSection)
    ofdm: OfdmSection = field(default_factory=OfdmSection)
    pa: PaSection = field(default_factory=PaSection)
    windows: WindowsSection = field(default_factory=WindowsSection)
    projection: ProjectionSection = field(default_factory=ProjectionSection)
    models: List[ModelSpec] = field(default_factory=list)
    bench: BenchSection = field(default_factory=BenchSection)
    output: OutputSection = field(default_factory=OutputSection)

    # ------------------------------------------------------------------
    # derived settings

    def component_seeds(self) -> Dict[str, int]:
        children = np.random.SeedSequence(self.seed).spawn(len(SEED_COMPONENTS))
        seeds = {
            name: int(child.generate_state(1)[0])
            for name, child in zip(SEED_COMPONENTS, children)
        }
        for name in SEED_COMPONENTS:
            override = getattr(self.seeds, name)
            if override is not None:
                seeds[name] = int(override)
        return seeds

    def ofdm_config(self) -> OfdmConfig:
        return OfdmConfig(**dataclasses.asdict(self.ofdm), seed=self.component_seeds()['ofdm'])

    def reference_pa(self) -> ReferencePa:
        return ReferencePa(memory_depth=self.pa.memory_depth, order=self.pa.order, snr_db=self.pa.snr_db)

    def solver_config(self, spec: ModelSpec) -> SolverConfig:
        seeds = self.component_seeds()
        return SolverConfig(
            gamma=spec.gamma,
            iterations=spec.iterations,
            seed=seeds['init'],
            init_scale=spec.init_scale,
            oversample=self.projection.oversample,
            power=self.projection.power,
            sketch_seed=seeds['sketch'],
        )

    @property
    def projection_target(self) -> Tuple[int, int]:
        return self.projection.m2, self.projection.p

    def find_model(self, selector: str) -> ModelSpec:
        for spec in self.models:
            if selector in (spec.label, spec.name):
                return spec
        for spec in self.models:
            if spec.solver == selector:
                return spec
        available = ', '.join(s.label for s in self.models) or '(none)'
        raise ConfigError(f"No model '{selector}' in config. Available: {available}")

    def to_dict(self) -> Dict[str, Any]:
        return dataclasses.asdict(self)

    # ------------------------------------------------------------------
    # validation

    def validate(self) -> None:
        self.ofdm_config().validate()
        try:
            self.reference_pa()
        except ValueError as e:
            raise ConfigError(f"pa: {e}") from e

        length = self.ofdm_config().signal_len
        for name in ('train', 'test'):
            window = getattr(self.windows, name)
            if window.n < 1 or window.t0 < 0:
                raise ConfigError(f"windows.{name}: need t0 >= 0 and n >= 1, got {window}")
            if window.t0 + window.n > length:
                raise ConfigError(
                    f"windows.{name} [{window.t0}, {window.t0 + window.n - 1}] exceeds the "
                    f"generated signal length {length}"
                )

        if self.output.signal_format not in ('csv', 'gmpt'):
            raise ConfigError(f"output.signal_format must be 'csv' or 'gmpt', got '{self.output.signal_format}'")

        labels = set()
        for k, spec in enumerate(self.models):
            self.validate_model(spec, f"models[{k}]")
            if spec.label in labels:
                raise ConfigError(f"models[{k}]: duplicate model label '{spec.label}'")
            labels.add(spec.label)

    def validate_model(self, spec: ModelSpec, where: str = 'model') -> None:
        if spec.solver not in SOLVER_KINDS:
            raise ConfigError(f"{where}.solver: unknown solver '{spec.solver}'. Available: {', '.join(SOLVER_KINDS)}")
        kind = SOLVER_KINDS[spec.solver]
        try:
            check_ranks(kind, spec.dims, spec.ranks)
        except ValueError as e:
            raise ConfigError(f"{where}: {e}") from e
        m1, m2, _ = spec.dims
        for name in ('train', 'test'):
            t0 = getattr(self.windows, name).t0
            if t0 < max(m1, m2) - 1:
                raise ConfigError(f"{where}: windows.{name}.t0={t0} is below max(M1, M2) - 1 for dims {spec.dims}")
        if spec.rp_als:
            if kind == 'gmp':
                raise ConfigError(f"{where}: rp_als only applies to cp, tt and tucker models")
            if self.projection.m2 > m2 or self.projection.p > spec.dims[2]:
                raise ConfigError(
                    f"{where}: projection ({self.projection.m2}, {self.projection.p}) exceeds dims {spec.dims}"
                )
        try:
            self.solver_config(spec).validate()
        except ConfigError as e:
            raise ConfigError(f"{where}: {e}") from e


def config_hash(cfg: ExperimentConfig) -> str:
    """SHA-256 of the canonical JSON of the resolved config"""
    canonical = json.dumps(cfg.to_dict(), sort_keys=True, separators=(',', ':'))
    return hashlib.sha256(canonical.encode('utf-8')).hexdigest()


# ----------------------------------------------------------------------
# strict loader


def _line_of(text: str, key: str) -> Optional[int]:
    needle = f'"{key}"'
    for number, line in enumerate(text.splitlines(), start=1):
        if needle in line:
            return number
    return None


def _where(path: str, text: str, key: str) -> str:
    line = _line_of(text, key)
    return f"'{path}' (line {line})" if line else f"'{path}'"


def _build(cls, data: Any, path: str, text: str):
    if not isinstance(data, dict):
        raise ConfigError(f"{_where(path, text, path.split('.')[-1])}: expected an object, got {type(data).__name__}")
    hints = typing.get_type_hints(cls)
    known = {f.name for f in dataclasses.fields(cls)}
    for key in data:
        if key not in known:
            dotted = f"{path}.{key}" if path else key
            raise ConfigError(f"Unknown config key {_where(dotted, text, key)}. Allowed: {', '.join(sorted(known))}")

    kwargs = {}
    for name, value in data.items():
        dotted = f"{path}.{name}" if path else name
        kwargs[name] = _convert(hints[name], value, dotted, text)
    return cls(**kwargs)


def _convert(hint, value, path: str, text: str):
    origin = typing.get_origin(hint)
    args = typing.get_args(hint)
    key = path.split('.')[-1].split('[')[0]

    if dataclasses.is_dataclass(hint):
        return _build(hint, value, path, text)
    if origin is Union:
        if value is None and type(None) in args:
            return None
        inner = [a for a in args if a is not type(None)]
        return _convert(inner[0], value, path, text)
    if origin in (list, List):
        if not isinstance(value, list):
            raise ConfigError(f"{_where(path, text, key)}: expected a list")
        return [_convert(args[0], item, f"{path}[{k}]", text) for k, item in enumerate(value)]
    if hint is bool:
        if not isinstance(value, bool):
            raise ConfigError(f"{_where(path, text, key)}: expected true/false, got {value!r}")
        return value
    if hint is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{_where(path, text, key)}: expected an integer, got {value!r}")
        return value
    if hint is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{_where(path, text, key)}: expected a number, got {value!r}")
        return float(value)
    if hint is str:
        if not isinstance(value, str):
            raise ConfigError(f"{_where(path, text, key)}: expected a string, got {value!r}")
        return value
    return value


def parse_config(text: str, source: str = '<config>') -> ExperimentConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{source}: invalid JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
    cfg = _build(ExperimentConfig, data, '', text)
    cfg.validate()
    return cfg


def load_config(path: Union[str, Path, None] = None) -> ExperimentConfig:
    """Load and validate a config file (defaults when path is None)"""
    if path is None:
        cfg = ExperimentConfig()
        cfg.validate()
        return cfg
    path = Path(path)
    return parse_config(path.read_text(encoding='utf-8'), str(path))
