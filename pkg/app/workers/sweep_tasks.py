"""
Celery tasks for parameter sweeps
"""
import logging
from functools import lru_cache
from typing import Any, Dict, List, Sequence

from core import errors
from core.config import settings
from core.errors import TauberError
from schemas.weights import WeightSpec
from services.series_service import required_order
from services.clt_service import CltService
from services.voronoi_service import VoronoiService
from utils.families import coefficient_family, hhat_family, parse_d_spec
from workers.celery_app import celery_app

logger = logging.getLogger(__name__)


@lru_cache(maxsize=64)
def _weights(d_spec: str, n_max: int, seed: int) -> WeightSpec:
    return parse_d_spec(d_spec, n_max, seed)


def _failed(index: int, exc: TauberError) -> Dict[str, Any]:
    return {
        "status": "failed",
        "index": index,
        "error": exc.message,
        "error_type": type(exc).__name__,
        "context": {k: repr(v) for k, v in exc.context.items()},
    }


@celery_app.task(bind=True, name="sweep_remainder")
def remainder_task(self, index: int, d_spec: str, coeffs: str, n: int, seed: int):
    """
    One remainder_report row

    Args:
        index: Position in the sweep; results are collected in this order
        d_spec: Weight spec string (constant:/random:/file:)
        coeffs: Coefficient family name
        n: Index; the tail horizon is the default multiple of n
        seed: Seed for random weights and random coefficient families
    """
    try:
        order = max(settings.TAIL_HORIZON_FACTOR * n, required_order(n))
        w = _weights(d_spec, order, seed)
        a = coefficient_family(coeffs, order, seed)
        row = VoronoiService(w).remainder(a, n).row()
        row.update(d=d_spec, coeffs=coeffs)
        return {"status": "completed", "index": index, "row": row}
    except TauberError as e:
        return _failed(index, e)


@celery_app.task(bind=True, name="sweep_tauber")
def tauber_task(self, index: int, d_spec: str, coeffs: str, n: int, seed: int):
    """Voronoi mean and S(g;n)/(n p_n) at one n"""
    try:
        w = _weights(d_spec, n, seed)
        a = coefficient_family(coeffs, required_order(n), seed)
        voronoi = VoronoiService(w)
        row = {
            "n": n,
            "voronoi_mean": float(voronoi.mean(a, n)),
            "tauber_ratio": float(voronoi.trajectory(a, [n])[0]),
        }
        return {"status": "completed", "index": index, "row": row}
    except TauberError as e:
        return _failed(index, e)


@celery_app.task(bind=True, name="sweep_gap")
def gap_task(self, index: int, d_spec: str, hhat: str, n: int, p: float, seed: int, override_guard: bool = False):
    """Corrected Kolmogorov gap of the normalized hhat family at one (n, p)"""
    try:
        w = _weights(d_spec, n, seed)
        clt = CltService(w)
        h = clt.normalize(hhat_family(hhat, n))
        row = clt.gap(h, p, override_guard=override_guard).model_dump()
        stats = clt.stats(h, p)
        row.update(
            d=d_spec,
            hhat=hhat,
            A_n=stats.A_n,
            C_n=stats.C_n,
            L_n3=stats.L_n3,
            L_np=stats.L_np,
            L_n2_prime=stats.L_n2_prime,
        )
        return {"status": "completed", "index": index, "row": row}
    except TauberError as e:
        return _failed(index, e)


@celery_app.task(bind=True, name="sweep_kolmogorov")
def kolmogorov_task(self, index: int, d_spec: str, n: int, oracle: bool, seed: int):
    """Kolmogorov distance of the standardized cycle count at one n"""
    try:
        w = _weights(d_spec, n, seed)
        point = CltService(w).goncharov(n, oracle=oracle)
        return {"status": "completed", "index": index, "row": point.model_dump()}
    except TauberError as e:
        return _failed(index, e)


def dispatch_sweep(task, kwargs_list: Sequence[Dict[str, Any]]) -> List[Dict[str, Any]]:
    """
    Submit every task, then collect results in submission order

    Raises:
        TauberError: the first failed task, re-raised as its original class
    """
    pending = [task.apply_async(kwargs={"index": i, **kw}) for i, kw in enumerate(kwargs_list)]
    logger.info("dispatched %d %s tasks", len(pending), task.name)
    rows: List[Dict[str, Any]] = []
    for result in pending:
        payload = result.get()
        if payload["status"] != "completed":
            cls = getattr(errors, payload["error_type"], TauberError)
            raise cls(payload["error"], **{**payload["context"], "index": payload["index"]})
        rows.append(payload["row"])
    return rows
