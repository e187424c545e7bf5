"""Run configuration: flat dotted-key text files plus command-line overrides.

The format is one `key = value` pair per line, `#` comments, with dotted
key paths (e.g. `system.truncation_N = 6`). Unknown keys are rejected with
the offending path. Defaults reproduce the reference parameter set:
localized/FRET x in {1, 6}, N = 12, 300 K, lambda = 35 cm^-1,
gamma^-1 = 50 fs, trap time 1 ps, 1000 fs of dynamics.
"""

from dataclasses import dataclass

from .heom import IntegratorConfig
from .measures import all_pairs
from .model import SystemParams

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    pass


def _parse_scalar(text):
    text = text.strip()
    for conv in (int, float):
        try:
            return conv(text)
        except ValueError:
            continue
    return text


def parse_config_text(text):
    """Parse `key = value` lines into a flat dict of scalars/strings."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw!r}")
        key, value = line.split("=", 1)
        out[key.strip()] = _parse_scalar(value)
    return out


def _parse_pairs(value):
    if value == "all":
        return "all"
    pairs = []
    for chunk in str(value).split(","):
        chunk = chunk.strip()
        try:
            m, n = chunk.split("-")
            m, n = int(m), int(n)
        except ValueError:
            raise ConfigError(f"pairs: bad pair {chunk!r}, expected like 1-2") from None
        if m == n:
            raise ConfigError(f"pairs: sites must differ in {chunk!r}")
        pairs.append((min(m, n), max(m, n)))
    return pairs


def _parse_sites(value):
    return tuple(int(s) for s in str(value).split(","))


@dataclass(frozen=True)
class RunConfig:
    initial_kind: str  # "localized" or "fret"
    initial_site: int
    params: SystemParams
    integrator: IntegratorConfig
    pairs: object  # "all" or list of (m, n)

    def pair_list(self):
        if self.pairs == "all":
            return all_pairs(self.params.n_sites)
        return list(self.pairs)

    def as_flat_dict(self):
        """Fully resolved configuration, suitable for the run manifest."""
        p, ic = self.params, self.integrator
        pairs = ("all" if self.pairs == "all"
                 else ",".join(f"{m}-{n}" for m, n in self.pairs))
        return {
            "schema_version": SCHEMA_VERSION,
            "initial.kind": self.initial_kind,
            "initial.site": self.initial_site,
            "system.truncation_N": p.truncation_N,
            "system.temperature_K": p.temperature_K,
            "system.lambda_cm": p.lambda_cm,
            "system.gamma_inv_fs": p.gamma_inv_fs,
            "system.trap_rate_inv_ps": p.trap_rate_inv_ps,
            "system.trap_sites": ",".join(str(s) for s in p.trap_sites),
            "system.t_end_fs": p.t_end_fs,
            "system.dt_out_fs": p.dt_out_fs,
            "integrator.abs_tol": ic.abs_tol,
            "integrator.rel_tol": ic.rel_tol,
            "integrator.initial_step_fs": ic.initial_step_fs,
            "integrator.max_step_fs": ic.max_step_fs,
            "pairs": pairs,
        }


_SYSTEM_KEYS = {
    "system.truncation_N": ("truncation_N", int),
    "system.temperature_K": ("temperature_K", float),
    "system.lambda_cm": ("lambda_cm", float),
    "system.gamma_inv_fs": ("gamma_inv_fs", float),
    "system.trap_rate_inv_ps": ("trap_rate_inv_ps", float),
    "system.trap_sites": ("trap_sites", _parse_sites),
    "system.t_end_fs": ("t_end_fs", float),
    "system.dt_out_fs": ("dt_out_fs", float),
}

_INTEGRATOR_KEYS = {
    "integrator.abs_tol": ("abs_tol", float),
    "integrator.rel_tol": ("rel_tol", float),
    "integrator.initial_step_fs": ("initial_step_fs", float),
    "integrator.max_step_fs": ("max_step_fs", float),
}


def build_run_config(flat):
    """Validate a flat key dict and assemble a RunConfig."""
    flat = dict(flat)
    version = flat.pop("schema_version", SCHEMA_VERSION)
    if int(version) != SCHEMA_VERSION:
        raise ConfigError(f"schema_version: unsupported version {version}")

    kind = str(flat.pop("initial.kind", "localized"))
    if kind not in ("localized", "fret"):
        raise ConfigError(f"initial.kind: must be localized or fret, got {kind!r}")
    site = int(flat.pop("initial.site", 1))

    sys_kwargs = {}
    for key, (attr, conv) in _SYSTEM_KEYS.items():
        if key in flat:
            sys_kwargs[attr] = conv(flat.pop(key))
    int_kwargs = {}
    for key, (attr, conv) in _INTEGRATOR_KEYS.items():
        if key in flat:
            int_kwargs[attr] = conv(flat.pop(key))
    pairs = _parse_pairs(flat.pop("pairs", "all"))

    if flat:
        bad = sorted(flat)[0]
        raise ConfigError(f"unknown configuration key: {bad}")

    try:
        params = SystemParams(**sys_kwargs)
        integrator = IntegratorConfig(**int_kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    if not 1 <= site <= params.n_sites:
        raise ConfigError(f"initial.site: {site} outside 1..{params.n_sites}")
    return RunConfig(initial_kind=kind, initial_site=site, params=params,
                     integrator=integrator, pairs=pairs)


def load_run_config(path=None, overrides=()):
    """Read an optional config file and apply `key=value` override strings."""
    flat = {}
    if path is not None:
        with open(path) as fh:
            flat.update(parse_config_text(fh.read()))
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override must look like key=value, got {item!r}")
        key, value = item.split("=", 1)
        flat[key.strip()] = _parse_scalar(value)
    return build_run_config(flat)
