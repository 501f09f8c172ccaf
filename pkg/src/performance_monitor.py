import logging
import threading
import time
from dataclasses import dataclass
from datetime import datetime
from typing import Dict, List, Optional

import psutil

logger = logging.getLogger(__name__)


@dataclass
class PerformanceMetrics:
    """Performance metrics snapshot."""
    timestamp: str
    cpu_percent: float
    memory_percent: float
    memory_used_gb: float
    process_rss_mb: float
    identities_per_minute: Optional[float]
    identities_verified: int
    total_identities: int
    profile: str
    jobs: int


class PerformanceMonitor:
    """Monitor CPU and memory while a verify-all run is in progress."""

    def __init__(self, interval: float = 2.0, history: int = 100):
        self.metrics_history: List[PerformanceMetrics] = []
        self.monitoring = False
        self.monitor_thread: Optional[threading.Thread] = None
        self.lock = threading.Lock()
        self.interval = interval
        self.history = history
        self._process = psutil.Process()

        self.current_job = {
            'start_time': None,
            'identities_verified': 0,
            'total_identities': 0,
            'profile': 'full',
            'jobs': 1,
        }

    def start_monitoring(self, job_info: Dict):
        """Start performance monitoring for a run."""
        with self.lock:
            if self.monitoring:
                return

            self.monitoring = True
            self.current_job.update(job_info)
            self.current_job['start_time'] = time.time()
            self.current_job['identities_verified'] = 0
            self.metrics_history.clear()

            self.monitor_thread = threading.Thread(target=self._monitor_loop, daemon=True)
            self.monitor_thread.start()

            logger.info("performance monitoring started (profile %s, %d job(s))",
                        self.current_job['profile'], self.current_job['jobs'])

    def stop_monitoring(self) -> Dict:
        """Stop monitoring and return performance summary."""
        with self.lock:
            if not self.monitoring:
                return {}
            self.monitoring = False
        if self.monitor_thread:
            self.monitor_thread.join(timeout=self.interval + 1.0)
        # one final sample so short runs still report something
        metrics = self._collect_metrics()
        with self.lock:
            self.metrics_history.append(metrics)
            return self._generate_summary()

    def update_progress(self, identities_verified: int, total_identities: int):
        with self.lock:
            self.current_job['identities_verified'] = identities_verified
            self.current_job['total_identities'] = total_identities

    def _monitor_loop(self):
        """Background monitoring loop."""
        while self.monitoring:
            try:
                metrics = self._collect_metrics()
                with self.lock:
                    self.metrics_history.append(metrics)
                    if len(self.metrics_history) > self.history:
                        self.metrics_history = self.metrics_history[-self.history:]
                time.sleep(self.interval)
            except Exception as e:
                logger.warning("performance monitoring error: %s", e)
                time.sleep(1.0)

    def _rate(self) -> Optional[float]:
        start = self.current_job['start_time']
        done = self.current_job['identities_verified']
        if not start or done <= 0:
            return None
        elapsed = time.time() - start
        return done * 60.0 / elapsed if elapsed > 0 else None

    def _collect_metrics(self) -> PerformanceMetrics:
        memory = psutil.virtual_memory()
        try:
            rss = self._process.memory_info().rss
            for child in self._process.children(recursive=True):
                rss += child.memory_info().rss
        except psutil.Error:
            rss = 0

        return PerformanceMetrics(
            timestamp=datetime.now().isoformat(),
            cpu_percent=psutil.cpu_percent(),
            memory_percent=memory.percent,
            memory_used_gb=memory.used / (1024 ** 3),
            process_rss_mb=rss / (1024 ** 2),
            identities_per_minute=self._rate(),
            identities_verified=self.current_job['identities_verified'],
            total_identities=self.current_job['total_identities'],
            profile=self.current_job['profile'],
            jobs=self.current_job['jobs'],
        )

    def _generate_summary(self) -> Dict:
        if not self.metrics_history:
            return {}

        cpu_values = [m.cpu_percent for m in self.metrics_history]
        memory_values = [m.memory_percent for m in self.metrics_history]
        rss_values = [m.process_rss_mb for m in self.metrics_history]
        total_time = time.time() - (self.current_job['start_time'] or time.time())

        return {
            'total_time': total_time,
            'identities_verified': self.current_job['identities_verified'],
            'total_identities': self.current_job['total_identities'],
            'identities_per_minute': self._rate(),
            'avg_cpu_percent': sum(cpu_values) / len(cpu_values),
            'peak_cpu_percent': max(cpu_values),
            'avg_memory_percent': sum(memory_values) / len(memory_values),
            'peak_memory_percent': max(memory_values),
            'peak_process_rss_mb': max(rss_values),
            'profile': self.current_job['profile'],
            'jobs': self.current_job['jobs'],
        }
