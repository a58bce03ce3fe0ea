import logging
import os
from contextlib import contextmanager
from typing import Callable, Iterator

from tqdm import tqdm

log = logging.getLogger(__name__)


class Settings:
    ### General
    seed: int = 0

    ### CSB search
    csb_resolution: int = 1024
    csb_refine: int = 40
    csb_starts: int = 16
    csb_tolerance: float = 1e-7
    csb_random_pairs: int = 1_000_000
    csb_ladder_depth: int = 24

    ### Classification
    bracket_tol: float = 1e-3
    rho_cap: float = 64.0

    ### Sampling checks
    structure_samples: int = 1000
    structure_tolerance: float = 1e-9
    axiom_samples: int = 10_000

    ### Corners
    sphere_resolution: int = 4096
    collinearity_tol: float = 1e-9

    ### Parallelization
    _parallelization_backend: str | None = None
    _threads: int | None = None
    available_parallelization_backends = [None, "dask"]

    def __init__(self):
        self.parallelization_backend = os.environ.get("BWANGLE_PARALLELIZATION_BACKEND", "dask") or None
        self.threads = os.environ.get("BWANGLE_THREADS", None)

    @property
    def parallelization_backend(self):
        return self._parallelization_backend

    @parallelization_backend.setter
    def parallelization_backend(self, value):
        assert (
            value in self.available_parallelization_backends
        ), f"Invalid parallelization backend. Available options are: {self.available_parallelization_backends}"
        self._parallelization_backend = value

    @property
    def threads(self) -> int:
        return self._threads

    @threads.setter
    def threads(self, value: int | str | None):
        if value is None:
            value = os.cpu_count() or 1
        value = int(value)
        assert value >= 1, "The number of threads (BWANGLE_THREADS) must be at least 1"
        self._threads = value

    @contextmanager
    def override(self, **values) -> Iterator["Settings"]:
        """Temporarily set some settings, restored on exit even if an error is raised

        Examples:
            ```python
            with settings.override(seed=3, csb_resolution=256):
                bwangle.upsilon(space)
            ```
        """
        for name in values:
            assert hasattr(self, name), f"Unknown setting {name}"
        previous = {name: getattr(self, name) for name in values}
        try:
            for name, value in values.items():
                setattr(self, name, value)
            yield self
        finally:
            for name, value in previous.items():
                setattr(self, name, value)

    def _run_with_backend(self, functions: list[Callable], desc: str | None = None) -> list:
        """Run zero-argument callables and return their results in the input order"""
        assert len(functions) > 0, "No function to run"

        if len(functions) == 1 or self.parallelization_backend is None or self.threads == 1:
            return [f() for f in tqdm(functions, desc=desc, disable=len(functions) == 1)]

        log.info(f"Using {self.parallelization_backend} backend with {self.threads} threads")
        return getattr(self, f"_run_{self.parallelization_backend}_backend")(functions)

    ### Dask backend
    def _run_dask_backend(self, functions: list[Callable]) -> list:
        import dask
        import dask.delayed

        tasks = [dask.delayed(function)() for function in functions]
        return list(dask.compute(*tasks, scheduler="threads", num_workers=min(self.threads, len(functions))))


settings = Settings()
