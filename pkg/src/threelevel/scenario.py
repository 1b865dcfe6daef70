"""Scenario configuration, observable evaluation and tabular output.

A scenario is a JSON document::

    {
      "name": "qfi_weak_coupling",                       optional, names output files
      "model": "vtype" | "lambda",
      "atom": {"omega1": 90, "omega2": 92, "gamma1": 1, "gamma2": 1},
      "spectrum": {"omega0": 91, "lam": 0.1},
      "initial": {"angles": {"theta": 0.785, "phi": 0.785, "eta1": 1.57, "eta2": 1.57}}
              or {"amplitudes": [c_a, c_b, c_c]},   each a number or [re, im]
      "timeGrid": {"tMax": 10, "points": 201},
      "outputs": ["rho.11", "qfi.theta", ...],
      "werner": {"epsilon": 0.5, "mode": "unilateral"},   needed by two-qutrit outputs
      "sweep": {"parameter": "spectrum.omega0", "values": [79, 85, 91]}
    }

All frequencies and rates are in units of the reference rate gamma, so the
time axis is ``gamma * t``. V-type amplitudes are ordered (|0>, |1>, |2>) and
Lambda-type amplitudes (|1>, |2>, |3>); ``rho.ij`` uses the same labels.
"""
import copy
import json
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

from . import channel, interference, lambda_atom, metrics, oracle, vtype
from .errors import ConfigError, InvalidArgumentError
from .lambda_atom import LambdaAtomParams, PureInitialStateLambda, build_lambda_solution
from .spectrum import LorentzianSpectrum
from .vtype import ANGLE_NAMES, PureInitialStateV, VAtomParams, build_propagator

MODELS = ("vtype", "lambda")
TOP_KEYS = ("name", "model", "atom", "spectrum", "initial", "timeGrid", "outputs", "werner", "sweep")
ATOM_KEYS = ("omega1", "omega2", "gamma1", "gamma2")
SPECTRUM_KEYS = ("omega0", "lam")
WERNER_MODES = ("unilateral", "bilateral")
BRANCHES = {"generic": "distinct", "double": "double", "triple": "triple"}

_LABELS = {"vtype": "012", "lambda": "123"}
_COMMON_V = (["excited_population"] + [f"qfi.{a}" for a in ANGLE_NAMES]
             + ["negativity.unilateral", "negativity.bilateral", "coherence.l1", "coherence.rel",
                "interference.trapped_fraction", "interference.imaginary_root_count"])
_COMMON_L = ["xi", "alpha1", "alpha2", "alpha3", "theta", "interference.imaginary_root_count"]
_COMPLEX = {"xi", "theta"}


def registered_observables(model):
    """Observable names accepted for ``model``, in a stable order."""
    labels = _LABELS[model]
    rho = [f"rho.{i}{j}" for i in labels for j in labels]
    return tuple(rho + (_COMMON_V if model == "vtype" else _COMMON_L))


def is_complex_observable(name):
    if name.startswith("rho."):
        return name[4] != name[5]
    return name in _COMPLEX


def column_names(outputs):
    """CSV headers for the requested observables (complex ones split in two)."""
    cols = []
    for name in outputs:
        cols += [f"{name}.re", f"{name}.im"] if is_complex_observable(name) else [name]
    return cols


def _number(value):
    return isinstance(value, (int, float)) and not isinstance(value, bool) and np.isfinite(value)


def _amplitude(value):
    if _number(value):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2 and all(_number(v) for v in value):
        return complex(value[0], value[1])
    raise ValueError("expected a number or [re, im]")


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated scenario. Build with :meth:`from_dict` or :func:`load_config`."""

    model: str
    atom: dict
    spectrum: dict
    initial: dict
    t_max: float
    points: int
    outputs: tuple
    werner: dict = None
    sweep: dict = None
    name: str = "scenario"
    raw: dict = field(default=None, repr=False, compare=False)

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict):
            raise ConfigError({"<root>": "configuration must be a JSON object"})
        problems = {}
        for key in data:
            if key not in TOP_KEYS:
                problems[key] = "unknown key"

        model = data.get("model")
        if model not in MODELS:
            problems["model"] = f"must be one of {list(MODELS)}"

        def block(key, names, required=True):
            sub = data.get(key)
            if sub is None and not required:
                return None
            if not isinstance(sub, dict):
                problems[key] = "missing or not an object"
                return {}
            out = {}
            for n in names:
                if n not in sub:
                    problems[f"{key}.{n}"] = "missing"
                elif not _number(sub[n]):
                    problems[f"{key}.{n}"] = "must be a finite number"
                else:
                    out[n] = float(sub[n])
            for n in sub:
                if n not in names:
                    problems[f"{key}.{n}"] = "unknown key"
            return out

        atom = block("atom", ATOM_KEYS)
        for g in ("gamma1", "gamma2"):
            if atom.get(g, 0.0) < 0:
                problems[f"atom.{g}"] = "must be >= 0"
        spectrum = block("spectrum", SPECTRUM_KEYS)
        if spectrum.get("lam", 0.0) < 0:
            problems["spectrum.lam"] = "must be >= 0"

        initial = cls._parse_initial(data.get("initial"), model, problems)

        grid = data.get("timeGrid")
        t_max, points = 0.0, 0
        if not isinstance(grid, dict):
            problems["timeGrid"] = "missing or not an object"
        else:
            t_max = grid.get("tMax")
            points = grid.get("points")
            if not _number(t_max) or not t_max > 0:
                problems["timeGrid.tMax"] = "must be a number > 0"
            if not isinstance(points, int) or isinstance(points, bool) or points < 2:
                problems["timeGrid.points"] = "must be an integer >= 2"
            for n in grid:
                if n not in ("tMax", "points"):
                    problems[f"timeGrid.{n}"] = "unknown key"

        outputs = data.get("outputs")
        if not isinstance(outputs, list) or not outputs:
            problems["outputs"] = "must be a non-empty list of observable names"
            outputs = []
        elif model in MODELS:
            known = registered_observables(model)
            for i, name in enumerate(outputs):
                if name not in known:
                    problems[f"outputs[{i}]"] = f"unsupported observable {name!r} for model {model}"
            if len(set(outputs)) != len(outputs):
                problems["outputs"] = "duplicate observable names"

        werner = None
        if "werner" in data:
            w = data["werner"]
            if not isinstance(w, dict):
                problems["werner"] = "must be an object"
            else:
                eps = w.get("epsilon")
                if not _number(eps) or not 0 <= eps <= 1:
                    problems["werner.epsilon"] = "must be a number in [0, 1]"
                mode = w.get("mode", "unilateral")
                if mode not in WERNER_MODES:
                    problems["werner.mode"] = f"must be one of {list(WERNER_MODES)}"
                for n in w:
                    if n not in ("epsilon", "mode"):
                        problems[f"werner.{n}"] = "unknown key"
                werner = {"epsilon": float(eps) if _number(eps) else 0.0, "mode": mode}
        needs_werner = [o for o in outputs if isinstance(o, str)
                        and o.startswith(("negativity.", "coherence."))]
        if needs_werner and werner is None:
            problems["werner"] = f"required by {needs_werner}"
        needs_angles = [o for o in outputs if isinstance(o, str) and o.startswith("qfi.")]
        if needs_angles and initial is not None and "angles" not in initial:
            problems["initial"] = f"angles required by {needs_angles}"

        sweep = None
        if "sweep" in data:
            s = data["sweep"]
            if not isinstance(s, dict) or set(s) != {"parameter", "values"}:
                problems["sweep"] = "must be an object with exactly 'parameter' and 'values'"
            else:
                vals = s["values"]
                if not isinstance(vals, list) or not vals or not all(_number(v) for v in vals):
                    problems["sweep.values"] = "must be a non-empty list of numbers"
                if not _sweep_target_ok(data, s["parameter"]):
                    problems["sweep.parameter"] = f"{s['parameter']!r} is not a numeric config field"
                sweep = {"parameter": s["parameter"], "values": list(vals) if isinstance(vals, list) else []}

        name = data.get("name", "scenario")
        if not isinstance(name, str) or not name or any(c in name for c in "/\\"):
            problems["name"] = "must be a non-empty string without path separators"

        if problems:
            raise ConfigError(problems)
        return cls(model, atom, spectrum, initial, float(t_max), int(points), tuple(outputs),
                   werner, sweep, name, raw=copy.deepcopy(data))

    @staticmethod
    def _parse_initial(init, model, problems):
        if not isinstance(init, dict) or len(init) != 1 or not set(init) <= {"angles", "amplitudes"}:
            problems["initial"] = "must be {'angles': {...}} or {'amplitudes': [...]}"
            return None
        if "angles" in init:
            if model == "lambda":
                problems["initial.angles"] = "the lambda model takes amplitudes"
                return None
            ang = init["angles"]
            if not isinstance(ang, dict) or set(ang) != set(ANGLE_NAMES):
                problems["initial.angles"] = f"needs exactly {list(ANGLE_NAMES)}"
                return None
            bad = [k for k in ANGLE_NAMES if not _number(ang[k])]
            for k in bad:
                problems[f"initial.angles.{k}"] = "must be a finite number"
            return None if bad else {"angles": tuple(float(ang[k]) for k in ANGLE_NAMES)}
        amps = init["amplitudes"]
        if not isinstance(amps, list) or len(amps) != 3:
            problems["initial.amplitudes"] = "needs three entries"
            return None
        out = []
        for i, a in enumerate(amps):
            try:
                out.append(_amplitude(a))
            except ValueError as exc:
                problems[f"initial.amplitudes[{i}]"] = str(exc)
        if len(out) == 3:
            norm = sum(abs(c) ** 2 for c in out)
            if abs(norm - 1) > 1e-12:
                problems["initial.amplitudes"] = f"norm is {norm!r}, expected 1"
                return None
            return {"amplitudes": tuple(out)}
        return None

    @property
    def grid(self):
        return np.linspace(0.0, self.t_max, self.points)

    def to_dict(self):
        return copy.deepcopy(self.raw)

    def with_value(self, path, value):
        """Copy of this config with the numeric field at dotted ``path`` replaced."""
        data = self.to_dict()
        data.pop("sweep", None)
        *parents, leaf = path.split(".")
        node = data
        for p in parents:
            node = node[p]
        node[leaf] = value
        return ScenarioConfig.from_dict(data)

    def atom_params(self):
        cls = VAtomParams if self.model == "vtype" else LambdaAtomParams
        return cls(**self.atom)

    def spectrum_obj(self):
        return LorentzianSpectrum(**self.spectrum)

    def initial_state(self):
        if "angles" in self.initial:
            return PureInitialStateV.from_angles(*self.initial["angles"])
        a = self.initial["amplitudes"]
        cls = PureInitialStateV if self.model == "vtype" else PureInitialStateLambda
        return cls(*a)


def _sweep_target_ok(data, path):
    if not isinstance(path, str):
        return False
    node = data
    for p in path.split("."):
        if not isinstance(node, dict) or p not in node:
            return False
        node = node[p]
    return _number(node)


def load_config(path):
    """Read and validate a JSON scenario file."""
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError({"<file>": f"cannot read {path}: {exc.strerror}"}) from exc
    except json.JSONDecodeError as exc:
        raise ConfigError({"<file>": f"invalid JSON at line {exc.lineno}: {exc.msg}"}) from exc
    return ScenarioConfig.from_dict(data)


@dataclass
class TimeSeriesRecord:
    """A ``gamma_t`` grid plus named real columns of the same length."""

    grid: np.ndarray
    columns: dict

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        for name, col in self.columns.items():
            col = np.asarray(col)
            if np.iscomplexobj(col):
                raise InvalidArgumentError(f"column {name} is complex; split it into .re/.im first")
            if col.shape != self.grid.shape:
                raise InvalidArgumentError(f"column {name} has length {col.size}, grid has {self.grid.size}")
            self.columns[name] = col.astype(float)

    @classmethod
    def from_observables(cls, grid, series):
        """Build from ``{observable: array}``, splitting complex observables."""
        cols = {}
        for name, val in series.items():
            val = np.asarray(val)
            if is_complex_observable(name):
                cols[f"{name}.re"] = val.real
                cols[f"{name}.im"] = val.imag
            else:
                cols[name] = np.real(val)
        return cls(grid, cols)

    def to_csv(self):
        lines = [",".join(["gamma_t"] + list(self.columns))]
        data = np.column_stack([self.grid] + list(self.columns.values()))
        for row in data:
            lines.append(",".join(f"{x:.17g}" for x in row))
        return "\n".join(lines) + "\n"

    def to_json(self):
        payload = {"gamma_t": self.grid.tolist(), "columns": {k: v.tolist() for k, v in self.columns.items()}}
        return json.dumps(payload, indent=1) + "\n"


def write_atomic(path, text):
    """Write ``text`` to ``path`` via a temporary file and rename."""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class _Evaluator:
    """Lazily shared intermediate results for one scenario."""

    def __init__(self, config, force_branch=None):
        self.config = config
        self.grid = config.grid
        self.params = config.atom_params()
        self.spec = config.spectrum_obj()
        self.init = config.initial_state()
        if config.model == "vtype":
            branch = BRANCHES[force_branch] if force_branch else None
            self.prop = build_propagator(self.params, self.spec, branch=branch)
            self.rho = vtype.density_matrix_v(self.prop, self.init, self.grid)
        else:
            if force_branch not in (None, "generic"):
                raise InvalidArgumentError("forced branches apply to the vtype model only")
            self.sol = build_lambda_solution(self.params, self.spec)
            self.rho = lambda_atom.density_matrix_lambda(self.sol, self.init, self.grid)
        self._two_qutrit = None

    def two_qutrit_states(self):
        if self._two_qutrit is None:
            w = self.config.werner
            rho0 = channel.werner_state(w["epsilon"])
            states = {}
            for mode in WERNER_MODES:
                states[mode] = np.array([
                    channel.extend_channel(channel.build_v_channel(self.prop, t), mode).apply(rho0)
                    for t in self.grid])
            self._two_qutrit = states
        return self._two_qutrit

    def __call__(self, name):
        cfg = self.config
        n = self.grid.size
        if name.startswith("rho."):
            labels = _LABELS[cfg.model]
            i, j = labels.index(name[4]), labels.index(name[5])
            val = self.rho[:, i, j]
            return val if i != j else val.real
        if cfg.model == "vtype":
            if name == "excited_population":
                return (self.rho[:, 1, 1] + self.rho[:, 2, 2]).real
            if name.startswith("qfi."):
                req = metrics.QfiRequest(name[4:], cfg.initial["angles"])
                return metrics.qfi_evolution(self.prop, req, self.grid)
            if name.startswith("negativity."):
                return np.array([metrics.negativity(r) for r in self.two_qutrit_states()[name[11:]]])
            if name.startswith("coherence."):
                states = self.two_qutrit_states()[cfg.werner["mode"]]
                fn = metrics.l1_coherence if name == "coherence.l1" else metrics.rel_entropy_coherence
                return np.array([fn(r) for r in states])
            report = interference.classify_v_asymptotics(self.prop, self.init)
            if name == "interference.trapped_fraction":
                return np.full(n, report.trapped_fraction)
            return np.full(n, float(report.imaginary_root_count))
        if name == "xi":
            return lambda_atom.xi(self.sol, self.grid)
        if name in ("alpha1", "alpha2", "alpha3"):
            return getattr(lambda_atom, name)(self.sol, self.grid)
        if name == "theta":
            return lambda_atom.theta_coherence(self.sol, self.grid)
        found = interference.lambda_imaginary_root_search(self.params, self.spec)
        return np.full(n, float(len(found)))


def run_scenario(config, force_branch=None):
    """Evaluate every requested observable on the config's time grid."""
    ev = _Evaluator(config, force_branch)
    return TimeSeriesRecord.from_observables(ev.grid, {name: ev(name) for name in config.outputs})


def run_sweep(config, force_branch=None):
    """``[(value, TimeSeriesRecord), ...]`` over the config's sweep values."""
    if config.sweep is None:
        raise ConfigError({"sweep": "missing; the sweep subcommand needs a sweep block"})
    path = config.sweep["parameter"]
    return [(v, run_scenario(config.with_value(path, v), force_branch)) for v in config.sweep["values"]]


def merge_sweep(config, results):
    """Single record with each column suffixed by ``@<parameter>=<value>``."""
    path = config.sweep["parameter"]
    cols = {}
    for value, rec in results:
        for name, col in rec.columns.items():
            cols[f"{name}@{path}={value!r}"] = col
    return TimeSeriesRecord(config.grid, cols)


def _verification_series(config, force_branch=None):
    ev = _Evaluator(config, force_branch)
    labels = _LABELS[config.model]
    names = [f"rho.{i}{j}" for i in labels for j in labels]
    return ev, {name: ev(name) for name in names}


def verify(config, integrator=None, force_branch=None, perturb=None, quadrature_step=2.5e-3):
    """Closed form against the numerical oracle on the config's grid.

    The V-type check compares every density-matrix entry. The Lambda-type
    check compares the entries fixed by ``c3`` on the grid, and the
    reservoir-fed ``alpha1, alpha2, theta`` at ``tMax`` against 2D
    trapezoidal quadrature with step ``quadrature_step``.

    Parameters
    ----------
    perturb : callable, optional
        Test hook. Receives and returns the ``{column: array}`` mapping of
        closed-form results before comparison.
    """
    integrator = integrator or oracle.IntegratorConfig()
    grid = config.grid
    ev, analytic = _verification_series(config, force_branch)
    if config.model == "vtype":
        c = oracle.integrate_v_microscopic(ev.params, ev.spec, ev.init, grid, integrator)
        rho_n = vtype.density_from_amplitudes(*c)
        numeric = {name: rho_n[:, "012".index(name[4]), "012".index(name[5])] for name in analytic}
        numeric = {k: (v if k[4] != k[5] else v.real) for k, v in numeric.items()}
    else:
        c3 = oracle.integrate_lambda_c3(ev.params, ev.spec, ev.init.c3, grid, integrator)
        c1 = ev.init.c1 * np.exp(1j * ev.params.omega1 * grid)
        c2 = ev.init.c2 * np.exp(1j * ev.params.omega2 * grid)
        keep = ("rho.33", "rho.13", "rho.23", "rho.31", "rho.32")
        analytic = {k: v for k, v in analytic.items() if k in keep}
        numeric = {"rho.33": np.abs(c3) ** 2, "rho.13": c1 * c3.conj(), "rho.23": c2 * c3.conj()}
        numeric["rho.31"] = numeric["rho.13"].conj()
        numeric["rho.32"] = numeric["rho.23"].conj()
        nq = int(np.ceil(config.t_max / quadrature_step)) + 1
        qgrid = np.linspace(0.0, config.t_max, nq)
        c3q = oracle.integrate_lambda_c3(ev.params, ev.spec, 1.0, qgrid, integrator)
        a1, a2, th = oracle.quadrature_lambda_coefficients(ev.params, ev.spec, c3q, qgrid)
        t_end = np.array([config.t_max])
        analytic.update(alpha1=lambda_atom.alpha1(ev.sol, t_end), alpha2=lambda_atom.alpha2(ev.sol, t_end),
                        theta=lambda_atom.theta_coherence(ev.sol, t_end))
        numeric.update(alpha1=np.array([a1]), alpha2=np.array([a2]), theta=np.array([th]))
    split_a = _split(analytic)
    if perturb is not None:
        split_a = perturb(split_a)
    return oracle.compare_report(split_a, _split(numeric))


def _split(series):
    out = {}
    for name, val in series.items():
        val = np.asarray(val)
        if is_complex_observable(name):
            out[f"{name}.re"] = val.real
            out[f"{name}.im"] = val.imag
        else:
            out[name] = np.real(val)
    return out


def interference_report(config, force_branch=None):
    """JSON-ready interference diagnostics for the configured atom."""
    params = config.atom_params()
    spec = config.spectrum_obj()
    if config.model == "vtype":
        branch = BRANCHES[force_branch] if force_branch else None
        prop = build_propagator(params, spec, branch=branch)
        report = interference.classify_v_asymptotics(prop, config.initial_state()).to_dict()
        report["branch"] = prop.branch.value
        report["necessary_condition"] = bool(interference.v_interference_necessary_condition(params))
        return {"model": "vtype", "asymptotics": report}
    found = interference.lambda_imaginary_root_search(params, spec)
    out = {"model": "lambda", "imaginary_roots": list(found)}
    if spec.lam > 0:
        delta, branch = interference.elimination_discriminant(params, spec)
        out["discriminant"] = {"value": delta, "branch": branch, "negative": delta < 0}
        if branch == "general":
            out["discriminant"]["closed_form"] = interference.elimination_closed_form(params, spec)
    return out
