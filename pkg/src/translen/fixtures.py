"""The embedded braid example: triangulation, drift graph and slice."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .fibered import FiberedConeData, SliceContext, make_slice, parse_slice
from .flowgraph import FlowGraph, Skeleton, parse_drift_graph
from .triangulation import Ingested, ingest, parse_triangulation

TRIANGULATION = "simplest-braid.tri"
DRIFT_GRAPH = "simplest-braid.dg"
SLICE = "simplest-braid.slice"


def read_text(name: str) -> str:
    return resources.files("translen").joinpath("data", name).read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def braid_ingested() -> Ingested:
    return ingest(parse_triangulation(read_text(TRIANGULATION)))


@lru_cache(maxsize=None)
def braid_drift_graph() -> FlowGraph:
    return parse_drift_graph(read_text(DRIFT_GRAPH))


@lru_cache(maxsize=None)
def braid_skeleton() -> Skeleton:
    return Skeleton.of(braid_drift_graph())


@lru_cache(maxsize=None)
def braid_fibered() -> FiberedConeData:
    return FiberedConeData.from_drifts([c.drift for c in braid_skeleton().cycles])


def slice_for(fibered: FiberedConeData, text: str) -> SliceContext:
    _, basis, norm = parse_slice(text)
    return make_slice(basis, norm, fibered)


@lru_cache(maxsize=None)
def braid_slice() -> SliceContext:
    return slice_for(braid_fibered(), read_text(SLICE))
