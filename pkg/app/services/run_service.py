"""
Command execution: config in, artifact files and an exit code out
"""
import cmath
import json
import logging
from typing import Any, Callable, Dict, List, Optional, Tuple

import click
from pydantic import ValidationError

from core.errors import TauberError
from schemas.run import CommandEnum, FormatEnum, RunConfig
from services.check_service import run_suite
from services.clt_service import CltService, l_at_one, rho
from services.permstat_service import PermStatService, empirical_law
from utils.export import Row, columns_of, emit_plotdata, write_table
from utils.families import fhat_family, hhat_family, parse_d_spec
from workers.sweep_tasks import dispatch_sweep, gap_task, remainder_task, tauber_task

logger = logging.getLogger(__name__)

Plot = Dict[str, Tuple[Tuple[str, str], List[Tuple[Any, Any]]]]

DEFAULT_SAMPLE_COUNT = 1000


class RunService:
    """Service that runs one command and writes its table"""

    def __init__(self, writer: Optional[Callable[[str], None]] = None):
        self.writer = writer or (lambda text: click.echo(text, nl=False))

    def execute(self, options: Dict[str, Any]) -> int:
        """
        Validate raw options and run them

        Returns:
            Exit status: 0 ok, 1 failed check or I/O error, 2 invalid input,
            3 guard exceeded, 4 numeric overflow
        """
        try:
            config = RunConfig(**options)
        except ValidationError as e:
            logger.error("invalid configuration: %s", _first_error(e))
            return 2
        return self.run(config)

    def run(self, config: RunConfig) -> int:
        """
        Run a validated config

        Args:
            config: Run configuration

        Returns:
            Exit status
        """
        handlers = {
            CommandEnum.WEIGHTS.value: self._weights,
            CommandEnum.VORONOI.value: self._voronoi,
            CommandEnum.TAUBER.value: self._tauber,
            CommandEnum.MEAN.value: self._mean,
            CommandEnum.DIST.value: self._dist,
            CommandEnum.CLT.value: self._clt,
            CommandEnum.SAMPLE.value: self._sample,
            CommandEnum.CHECK.value: self._check,
        }
        try:
            rows, columns, plot, passed = handlers[config.command](config)
            text = write_table(rows, columns, config.echo(), fmt=config.format, out=config.out)
            if config.out is None:
                self.writer(text)
            if config.plot_dir is not None:
                emit_plotdata(config.plot_dir, plot)
        except TauberError as e:
            logger.error("%s: %s", type(e).__name__, e)
            return e.exit_code
        except ValidationError as e:
            logger.error("invalid input: %s", _first_error(e))
            return 2
        except OSError as e:
            logger.error("I/O error: %s", e)
            return 1
        except ValueError as e:
            logger.error("invalid input: %s", e)
            return 2
        if not passed:
            logger.error("%s failed", config.command)
            return 1
        return 0

    # ============================================
    # COMMANDS
    # ============================================

    def _weights(self, config: RunConfig):
        top = max(config.ns)
        w = parse_d_spec(config.d_spec, top, config.seed)
        ks = range(top + 1) if config.n_sweep is None else config.ns
        rows = [{"n": k, "p": float(w.p[k])} for k in ks]
        plot = {"weights": (("n", "p"), [(r["n"], r["p"]) for r in rows])}
        return rows, ["n", "p"], plot, True

    def _voronoi(self, config: RunConfig):
        jobs = [
            {"d_spec": config.d_spec, "coeffs": config.coeffs, "n": n, "seed": config.seed}
            for n in config.ns
        ]
        rows = dispatch_sweep(remainder_task, jobs)
        columns = ["n", "voronoi_mean", "g_at_point", "correction", "lhs", "rhs_sum1", "rhs_sum2", "ratio"]
        plot = {"voronoi_ratio": (("n", "ratio"), [(r["n"], r["ratio"]) for r in rows])}
        return rows, columns, plot, True

    def _tauber(self, config: RunConfig):
        jobs = [
            {"d_spec": config.d_spec, "coeffs": config.coeffs, "n": n, "seed": config.seed}
            for n in config.ns
        ]
        rows = dispatch_sweep(tauber_task, jobs)
        plot = {"tauber": (("n", "S/(n p_n)"), [(r["n"], r["tauber_ratio"]) for r in rows])}
        return rows, ["n", "voronoi_mean", "tauber_ratio"], plot, True

    def _mean(self, config: RunConfig):
        rows: List[Row] = []
        for n in config.ns:
            w = parse_d_spec(config.d_spec, n, config.seed)
            perms, clt = PermStatService(w), CltService(w)
            f = fhat_family(config.fhat, n, config.seed)
            mean_gf, mean_enum = perms.means(f, config.override_guard)
            row: Row = {
                "n": n,
                "mean_gf": mean_gf,
                "mean_enum": mean_enum,
                "exp_l_one": _real(cmath.exp(l_at_one(f, w))),
                "m_at_scale": _real(cmath.exp(clt.l_at_scale(f, n))) if n else None,
                "rho": rho(f, config.p),
                "delta_ratio": clt.delta_bound(f).ratio if f.bounded_flag else None,
                "eu_ratio": clt.eu_bound(f, config.u).ratio,
            }
            rows.append(row)
        plot = {"mean": (("n", "mean"), [(r["n"], r["mean_gf"]) for r in rows])}
        return rows, columns_of(rows), plot, True

    def _dist(self, config: RunConfig):
        if config.n_sweep is not None and len(config.ns) > 1:
            logger.warning("dist uses the last n of the sweep only")
        n = config.ns[-1]
        w = parse_d_spec(config.d_spec, n, config.seed)
        perms = PermStatService(w)
        if config.hhat in ("cycles", "flat"):
            law = perms.cycles(n, override_guard=config.override_guard)
        else:
            law = perms.law(hhat_family(config.hhat, n), config.override_guard)
        if config.format == FormatEnum.JSON.value:
            rows = law.to_json()
        else:
            rows = [{"value": v, "prob": p} for v, p in law.atoms]
        plot = {"dist": (("value", "prob"), law.atoms)}
        return rows, ["value", "prob"], plot, True

    def _clt(self, config: RunConfig):
        jobs = [
            {
                "d_spec": config.d_spec,
                "hhat": config.hhat,
                "n": n,
                "p": config.p,
                "seed": config.seed,
                "override_guard": config.override_guard,
            }
            for n in config.ns
        ]
        rows = dispatch_sweep(gap_task, jobs)
        columns = ["n", "p", "A_n", "C_n", "L_n3", "L_np", "L_n2_prime", "gap", "budget", "ratio", "argmax"]
        plot: Plot = {"clt_ratio": (("n", "ratio"), [(r["n"], r["ratio"]) for r in rows])}
        if config.plot_dir is not None:
            n = config.ns[-1]
            w = parse_d_spec(config.d_spec, n, config.seed)
            clt = CltService(w)
            x, y = clt.gap_curve(clt.normalize(hhat_family(config.hhat, n)), config.override_guard)
            plot["clt_gap_curve"] = (("x", "corrected_gap"), list(zip(x.tolist(), y.tolist())))
        return rows, columns, plot, True

    def _sample(self, config: RunConfig):
        n = config.ns[-1]
        count = DEFAULT_SAMPLE_COUNT if config.count is None else config.count
        w = parse_d_spec(config.d_spec, n, config.seed)
        samples = PermStatService(w).sample(n, count, config.seed)
        rows = [
            {"sample": i, "cycles": t.num_cycles, "cycle_type": json.dumps(t.to_json(), sort_keys=True)}
            for i, t in enumerate(samples)
        ]
        plot: Plot = {"sample_cycles": (("cycles", "prob"), [])}
        if samples:
            plot["sample_cycles"] = (("cycles", "prob"), empirical_law([t.num_cycles for t in samples]).atoms)
        return rows, ["sample", "cycles", "cycle_type"], plot, True

    def _check(self, config: RunConfig):
        result = run_suite(config.suite, nmax=config.nmax, seed=config.seed, count=config.count)
        if result.summary:
            logger.info("suite %s summary: %s", result.name, json.dumps(result.summary, sort_keys=True, default=str))
        return result.rows, result.columns, result.plot, result.passed


def _real(z: complex) -> Any:
    return z.real if z.imag == 0 else z


def _first_error(e: ValidationError) -> str:
    err = e.errors()[0]
    loc = ".".join(str(x) for x in err.get("loc", ()))
    return f"{loc}: {err.get('msg')}" if loc else str(err.get("msg"))
