"""
Celery configuration for sweep tasks
"""
from celery import Celery
from core.config import settings

# Create Celery app
celery_app = Celery(
    "tauberperm_worker",
    broker=settings.REDIS_URL,
    backend=settings.REDIS_URL,
    include=["workers.sweep_tasks"]
)

# Configure Celery
celery_app.conf.update(
    task_serializer="json",
    accept_content=["json"],
    result_serializer="json",
    timezone="UTC",
    enable_utc=True,
    task_track_started=True,
    task_time_limit=600,
    task_soft_time_limit=570,
    # Desk runs execute in-process; a worker is only needed for distributed sweeps
    task_always_eager=settings.CELERY_TASK_ALWAYS_EAGER,
    task_eager_propagates=True,
)

celery_app.conf.task_routes = {
    "sweep_remainder": {"queue": settings.SWEEP_QUEUE},
    "sweep_tauber": {"queue": settings.SWEEP_QUEUE},
    "sweep_gap": {"queue": settings.SWEEP_QUEUE},
    "sweep_kolmogorov": {"queue": settings.SWEEP_QUEUE},
}
