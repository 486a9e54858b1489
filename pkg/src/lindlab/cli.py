"""Reproducible job runner.

Usage:
    lindlab run <config.toml> [--out DIR] [--seed N] [--threads K]
    lindlab recipes list
    lindlab recipes emit <name>

Jobs are described by a strict TOML config (unknown keys are errors);
outputs are written atomically under ``<outdir>/<job-name>/`` together
with a ``manifest.json`` carrying config echo, versions, seeds, wall time,
and content digests of every produced file. Output bodies contain no
timestamps, so identical config and seed give identical digests.

Exit codes: 0 success, 2 a verification job failed its checks,
1 configuration or runtime error. The default output directory is taken
from ``$LINDLAB_OUT``, falling back to ``./out``.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import hashlib
import json
import os
import sys
import time
from pathlib import Path
from typing import Callable, Optional

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

import numpy as np
import scipy

from . import __version__
from .certificates import (
    build_corollary1_modes,
    check_theorem1,
    check_theorem3,
    corollary1_report,
    find_dark_states,
    verify_multiblock,
)
from .dynamics import (
    evolve,
    observable_series,
    random_density_matrix,
    series_to_csv,
)
from .liouville import apply_lindbladian, assemble_superoperator
from .models import (
    HubbardChainParams,
    XxzRingParams,
    build_hubbard_chain,
    build_xxz_ring,
    doublon_density,
    site_number,
    site_spin_z,
)
from .operators import SparseOperator, load_coordinate_text, save_coordinate_text, site_operator
from .spectra import (
    classify_eigenvalues,
    full_spectrum,
    imaginary_count_scan,
    spectrum_to_csv,
    targeted_spectrum,
)
from .steady import grand_canonical_state, stationary_states

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VERIFY_FAILED = 2

SCHEMA_VERSION = 1


class ConfigError(ValueError):
    """Raised for malformed or unknown configuration content."""


_TOP_KEYS = {"schema", "job", "model", "run"}
_JOB_KEYS = {"type", "name"}
_MODEL_KEYS = {
    "xxz": {"kind", "n", "delta", "loss_sites", "gammas", "nnn_delta"},
    "hubbard": {
        "kind",
        "l_sites",
        "tau",
        "u",
        "mu",
        "epsilon",
        "dephasing_kind",
        "dephasing_gammas",
        "doublon_drive",
    },
}
_RUN_KEYS = {
    "spectrum": {"keep_vectors", "mode", "shift_imag", "k_per_shift"},
    "evolve": {
        "seed",
        "t_start",
        "t_stop",
        "dt",
        "observable",
        "observable_site",
        "rel_tol",
    },
    "verify-theorem1": {"tol"},
    "verify-theorem3": {"a_operator", "a_file", "rho_source", "betas", "tol"},
    "verify-corollary1": {
        "a_operator",
        "a_file",
        "rho_source",
        "betas",
        "n_max",
        "m_max",
        "tol",
        "premise_tol",
    },
    "verify-multiblock": {
        "a_operator",
        "a_file",
        "rho_source",
        "betas",
        "n",
        "m",
        "tol",
    },
    "stationary": {"tol"},
    "scan": {"n_list"},
}


def _toml_scalar(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return repr(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_toml_scalar(v) for v in value) + "]"
    raise ConfigError(f"cannot serialize {type(value).__name__} to TOML")


def toml_dumps(cfg: dict) -> str:
    """Serialize a job config back to TOML (scalars + one table level).

    ``tomllib`` is read-only, and job configs only ever use this shape, so
    a full writer dependency is not warranted. Round-trips through
    ``tomllib.loads`` without loss.
    """
    lines = []
    tables = []
    for key, value in cfg.items():
        if isinstance(value, dict):
            tables.append((key, value))
        else:
            lines.append(f"{key} = {_toml_scalar(value)}")
    for name, table in tables:
        lines.append("")
        lines.append(f"[{name}]")
        for key, value in table.items():
            if isinstance(value, dict):
                raise ConfigError("nested tables beyond one level are not used")
            lines.append(f"{key} = {_toml_scalar(value)}")
    return "\n".join(lines) + "\n"


def _check_keys(section: str, mapping: dict, allowed: set[str]) -> None:
    unknown = set(mapping) - allowed
    if unknown:
        raise ConfigError(
            f"unknown key(s) in [{section}]: {', '.join(sorted(unknown))}"
        )


def load_config(path: Path) -> dict:
    """Parse and strictly validate a job config."""
    try:
        with open(path, "rb") as fh:
            cfg = tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"config parse error: {exc}") from None

    _check_keys("top level", cfg, _TOP_KEYS)
    if cfg.get("schema") != SCHEMA_VERSION:
        raise ConfigError(
            f"schema must be {SCHEMA_VERSION}, got {cfg.get('schema')!r}"
        )
    for section in ("job", "model"):
        if section not in cfg:
            raise ConfigError(f"missing [{section}] section")
    _check_keys("job", cfg["job"], _JOB_KEYS)
    job_type = cfg["job"].get("type")
    if job_type not in _RUN_KEYS:
        raise ConfigError(
            f"unknown job type {job_type!r}; expect one of "
            f"{sorted(_RUN_KEYS)}"
        )
    if not isinstance(cfg["job"].get("name"), str) or not cfg["job"]["name"]:
        raise ConfigError("job.name must be a nonempty string")
    kind = cfg["model"].get("kind")
    if kind not in _MODEL_KEYS:
        raise ConfigError(f"model.kind must be 'xxz' or 'hubbard', got {kind!r}")
    _check_keys("model", cfg["model"], _MODEL_KEYS[kind])
    run = cfg.get("run", {})
    _check_keys("run", run, _RUN_KEYS[job_type])
    for key in ("tol", "premise_tol", "rel_tol"):
        if key in run and not (isinstance(run[key], (int, float)) and run[key] > 0):
            raise ConfigError(f"run.{key} must be a positive number")
    return cfg


def build_model(model_cfg: dict):
    """Instantiate the model; returns (h, lindblads, sym_or_none, params)."""
    kind = model_cfg["kind"]
    if kind == "xxz":
        params = XxzRingParams(
            n=int(model_cfg["n"]),
            delta=float(model_cfg["delta"]),
            loss_sites=tuple(int(s) for s in model_cfg.get("loss_sites", [1])),
            gammas=tuple(float(g) for g in model_cfg.get("gammas", [1.0])),
            nnn_delta=float(model_cfg.get("nnn_delta", 0.0)),
        )
        h, ls = build_xxz_ring(params)
        return h, ls, None, params
    params = HubbardChainParams(
        l_sites=int(model_cfg["l_sites"]),
        tau=float(model_cfg.get("tau", 1.0)),
        u=float(model_cfg.get("u", 0.0)),
        mu=float(model_cfg.get("mu", 0.0)),
        epsilon=(
            tuple(float(e) for e in model_cfg["epsilon"])
            if "epsilon" in model_cfg
            else None
        ),
        dephasing_kind=model_cfg.get("dephasing_kind", "none"),
        dephasing_gammas=tuple(
            float(g) for g in model_cfg.get("dephasing_gammas", [])
        ),
        doublon_drive=(
            tuple(float(g) for g in model_cfg["doublon_drive"])
            if "doublon_drive" in model_cfg
            else None
        ),
    )
    h, ls, sym = build_hubbard_chain(params)
    return h, ls, sym, params


def _select_a_operator(run: dict, sym, space) -> SparseOperator:
    name = run.get("a_operator", "eta_plus")
    if name == "eta_plus":
        if sym is None:
            raise ConfigError("eta_plus needs a hubbard model")
        return sym.eta_plus
    if name == "s_plus":
        if sym is None:
            raise ConfigError("s_plus needs a hubbard model")
        return sym.s_plus
    if name == "custom-file":
        if "a_file" not in run:
            raise ConfigError("a_operator = 'custom-file' needs run.a_file")
        path = Path(run["a_file"])  # absolute, or relative to the cwd
        if not path.exists():
            raise ConfigError(f"a_file not found: {path}")
        dim, mat = load_coordinate_text(path)
        if dim != space.dim:
            raise ConfigError(f"a_file dim {dim} does not match model dim {space.dim}")
        return SparseOperator(space, mat)
    raise ConfigError(f"unknown a_operator {name!r}")


def _stationary_rho(run: dict, h, ls, sym) -> np.ndarray:
    source = run.get("rho_source", "canonical")
    if source == "grand-canonical":
        if sym is None:
            raise ConfigError("grand-canonical rho needs a hubbard model")
        betas = run.get("betas", [0.0, 0.0, 0.0])
        if len(betas) != 3:
            raise ConfigError("run.betas must have three entries")
        return grand_canonical_state(tuple(float(b) for b in betas), sym)
    if source == "canonical":
        s = assemble_superoperator(h, ls)
        return stationary_states(s).canonical
    raise ConfigError(f"unknown rho_source {source!r}")


def _atomic_write_text(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + f".tmp-{os.getpid()}")
    tmp.write_text(text)
    os.replace(tmp, path)


def _digest(path: Path) -> str:
    """sha256 of the file body with '#' comment lines excluded."""
    hasher = hashlib.sha256()
    with open(path, "rb") as fh:
        for line in fh:
            if not line.startswith(b"#"):
                hasher.update(line)
    return hasher.hexdigest()


def _json_default(obj):
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _write_report(outdir: Path, report_dict: dict) -> None:
    text = (
        json.dumps(report_dict, indent=2, sort_keys=True, default=_json_default) + "\n"
    )
    _atomic_write_text(outdir / "report.json", text)


def _model_comment(cfg: dict) -> str:
    items = ",".join(f"{k}={v}" for k, v in sorted(cfg["model"].items()))
    return f"model {items}"


# -- job implementations ---------------------------------------------------
# Each returns (produced file names, passed).


def _job_spectrum(cfg, run, outdir, seed, threads):
    h, ls, _, _ = build_model(cfg["model"])
    s = assemble_superoperator(h, ls)
    if run.get("mode") == "targeted":
        shifts = [1j * float(w) for w in run.get("shift_imag", [1.0])]
        spec = targeted_spectrum(s, shifts, k_per_shift=int(run.get("k_per_shift", 8)))
    else:
        spec = full_spectrum(s, keep_vectors=run.get("keep_vectors"))
    cls = classify_eigenvalues(spec)
    tmp = outdir / "eigenvalues.csv"
    spectrum_to_csv(
        tmp,
        spec,
        cls,
        comments=[_model_comment(cfg), f"tol_zero={cls.tol_zero!r} tol_re={cls.tol_re!r}"],
    )
    return ["eigenvalues.csv"], True


def _job_evolve(cfg, run, outdir, seed, threads):
    h, ls, _, _ = build_model(cfg["model"])
    d = h.space.dim
    rho0 = random_density_matrix(d, seed)
    t = np.arange(
        float(run.get("t_start", 0.0)),
        float(run.get("t_stop", 100.0)) + 1e-12,
        float(run.get("dt", 0.25)),
    )
    rel_tol = float(run.get("rel_tol", 1e-9))
    traj = evolve(h, ls, rho0, t, rel_tol=rel_tol)
    obs_name = run.get("observable", "sx")
    site = int(run.get("observable_site", 1))
    space = h.space
    if cfg["model"]["kind"] == "xxz":
        if obs_name not in ("sx", "sy", "sz"):
            raise ConfigError(f"unknown observable {obs_name!r} for xxz")
        obs = site_operator(obs_name, site, space)
    else:
        if obs_name == "number":
            obs = site_number(space, site)
        elif obs_name == "spin_z":
            obs = site_spin_z(space, site)
        elif obs_name == "doublon":
            obs = doublon_density(space, site)
        else:
            raise ConfigError(f"unknown observable {obs_name!r} for hubbard")
    series = observable_series(traj, obs)
    series_to_csv(
        outdir / "series.csv",
        series,
        comments=[
            _model_comment(cfg),
            f"observable={obs_name} site={site}",
            f"seed={seed} rel_tol={rel_tol!r}",
        ],
    )
    return ["series.csv"], True


def _job_verify_theorem1(cfg, run, outdir, seed, threads):
    h, ls, _, _ = build_model(cfg["model"])
    tol = float(run.get("tol", 1e-8))
    darks = find_dark_states(h, ls, tol=tol)
    report = check_theorem1(darks, h, ls, tol=tol)
    doc = report.to_dict()
    doc["dark_states"] = [
        {"energy": d.energy, "residual_h": d.residual_h, "residual_l": d.residual_l}
        for d in darks
    ]
    _write_report(outdir, doc)
    return ["report.json"], report.passed


def _job_verify_theorem3(cfg, run, outdir, seed, threads):
    h, ls, sym, _ = build_model(cfg["model"])
    a = _select_a_operator(run, sym, h.space)
    rho_inf = _stationary_rho(run, h, ls, sym)
    report = check_theorem3(a, rho_inf, h, ls, tol=float(run.get("tol", 1e-8)))
    _write_report(outdir, report.to_dict())
    return ["report.json"], report.passed


def _job_verify_corollary1(cfg, run, outdir, seed, threads):
    h, ls, sym, _ = build_model(cfg["model"])
    a = _select_a_operator(run, sym, h.space)
    rho_inf = _stationary_rho(run, h, ls, sym)
    report = corollary1_report(
        a,
        rho_inf,
        n_max=int(run.get("n_max", 2)),
        m_max=int(run.get("m_max", 2)),
        h=h,
        lindblads=ls,
        tol=float(run.get("tol", 1e-9)),
        premise_tol=float(run.get("premise_tol", 1e-12)),
    )
    _write_report(outdir, report.to_dict())
    return ["report.json"], report.passed


def _job_verify_multiblock(cfg, run, outdir, seed, threads):
    h, ls, sym, _ = build_model(cfg["model"])
    if sym is None:
        raise ConfigError("verify-multiblock needs a hubbard model")
    a = _select_a_operator(run, sym, h.space)
    rho_inf = _stationary_rho(run, h, ls, sym)
    n, m = int(run.get("n", 1)), int(run.get("m", 0))
    mode = build_corollary1_modes(a, rho_inf, n, m, h, ls)
    if mode.status != "ok":
        doc = {"theorem": "multiblock", "mode": mode.to_dict(), "blocks": None}
        _write_report(outdir, doc)
        return ["report.json"], True
    block = verify_multiblock(mode.rho, sym, tol=float(run.get("tol", 1e-8)))
    doc = {"theorem": "multiblock", "mode": mode.to_dict(), **block.to_dict()}
    _write_report(outdir, doc)
    return ["report.json"], True


def _job_stationary(cfg, run, outdir, seed, threads):
    h, ls, _, _ = build_model(cfg["model"])
    s = assemble_superoperator(h, ls)
    tol = float(run.get("tol", 1e-9))
    basis = stationary_states(s, tol=tol)
    files = []
    save_coordinate_text(outdir / "canonical_state.txt", basis.canonical)
    files.append("canonical_state.txt")
    for i, mode in enumerate(basis.modes):
        name = f"mode_{i}.txt"
        save_coordinate_text(outdir / name, mode)
        files.append(name)
    residual = float(np.linalg.norm(apply_lindbladian(h, ls, basis.canonical)))
    eigmin = float(np.min(np.linalg.eigvalsh(basis.canonical)))
    doc = {
        "null_space_dimension": basis.dims,
        "canonical_residual": residual,
        "canonical_min_eigenvalue": eigmin,
        "canonical_trace": float(np.trace(basis.canonical).real),
        "tolerance": tol,
        "files": files,
    }
    _write_report(outdir, doc)
    files.append("report.json")
    return files, True


def _job_scan(cfg, run, outdir, seed, threads):
    model = cfg["model"]
    n_list = [int(n) for n in run.get("n_list", [3, 4])]
    delta = float(model["delta"])
    gamma = float(model.get("gammas", [1.0])[0])
    loss_site = int(model.get("loss_sites", [1])[0])

    if threads > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(
                pool.map(
                    lambda n: imaginary_count_scan([n], delta, gamma, loss_site)[0],
                    n_list,
                )
            )
    else:
        results = imaginary_count_scan(n_list, delta, gamma, loss_site)
    lines = [f"# {_model_comment(cfg)}", "n,count,status"]
    for e in results:
        count = "" if e.count is None else str(e.count)
        lines.append(f"{e.n},{count},{e.status}")
    _atomic_write_text(outdir / "scan.csv", "\n".join(lines) + "\n")
    return ["scan.csv"], True


_JOBS: dict[str, Callable] = {
    "spectrum": _job_spectrum,
    "evolve": _job_evolve,
    "verify-theorem1": _job_verify_theorem1,
    "verify-theorem3": _job_verify_theorem3,
    "verify-corollary1": _job_verify_corollary1,
    "verify-multiblock": _job_verify_multiblock,
    "stationary": _job_stationary,
    "scan": _job_scan,
}


def run_job(
    cfg: dict,
    out_root: Path,
    seed_override: Optional[int] = None,
    threads: int = 1,
) -> tuple[dict, int]:
    """Execute one validated config; returns (manifest, exit code)."""
    job_type = cfg["job"]["type"]
    name = cfg["job"]["name"]
    run = cfg.get("run", {})
    seed = seed_override if seed_override is not None else int(run.get("seed", 0))

    outdir = out_root / name
    outdir.mkdir(parents=True, exist_ok=True)
    started = time.monotonic()
    files, passed = _JOBS[job_type](cfg, run, outdir, seed, threads)
    wall = time.monotonic() - started

    manifest = {
        "schema": SCHEMA_VERSION,
        "job": job_type,
        "name": name,
        "config": cfg,
        "seed": seed,
        "versions": {
            "lindlab": __version__,
            "python": sys.version.split()[0],
            "numpy": np.__version__,
            "scipy": scipy.__version__,
        },
        "wall_time_s": wall,
        "files": [
            {"name": f, "sha256": _digest(outdir / f)} for f in sorted(files)
        ],
    }
    _atomic_write_text(
        outdir / "manifest.json", json.dumps(manifest, indent=2, sort_keys=True) + "\n"
    )
    return manifest, EXIT_OK if passed else EXIT_VERIFY_FAILED


def main(argv: Optional[list[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="lindlab", description="Lindblad-generator job runner"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute a job config")
    run_p.add_argument("config", type=Path)
    run_p.add_argument(
        "--out",
        type=Path,
        default=None,
        help="output root (default: $LINDLAB_OUT or ./out)",
    )
    run_p.add_argument("--seed", type=int, default=None, help="override run.seed")
    run_p.add_argument("--threads", type=int, default=1, help="scan fan-out threads")

    rec_p = sub.add_parser("recipes", help="bundled configs")
    rec_sub = rec_p.add_subparsers(dest="recipes_command", required=True)
    rec_sub.add_parser("list", help="list bundled recipe names")
    emit_p = rec_sub.add_parser("emit", help="print a bundled recipe")
    emit_p.add_argument("name")

    args = parser.parse_args(argv)

    from .recipes import RECIPES

    if args.command == "recipes":
        if args.recipes_command == "list":
            for name in RECIPES:
                print(name)
            return EXIT_OK
        if args.name not in RECIPES:
            print(f"unknown recipe {args.name!r}; see 'recipes list'", file=sys.stderr)
            return EXIT_ERROR
        sys.stdout.write(RECIPES[args.name])
        return EXIT_OK

    out_root = args.out
    if out_root is None:
        out_root = Path(os.environ.get("LINDLAB_OUT", "out"))
    try:
        cfg = load_config(args.config)
        _, code = run_job(cfg, out_root, seed_override=args.seed, threads=args.threads)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except RuntimeError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    return code


if __name__ == "__main__":
    sys.exit(main())
