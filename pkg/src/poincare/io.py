"""JSON input schema, deterministic output formats and the end-to-end job."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .dirichlet import DirichletDomain, GroupInput, dirichlet_domain
from .geometry import TOL_GEOM, GeometryError, Isometry, Point, Space, iso_eq
from .polyhedra import HalfSpace, Polyhedron
from .presentation import Analysis, Presentation, ValidationError, analyze, check_pairings
from .tessellation import DEFAULT_CAP, Window
from .words import Word

DEFAULT_WINDOW_RADIUS = 2.0
DEFAULT_WORD_RADIUS = 3


def fmt_float(x: float) -> float:
    """Round away float noise so that output is stable across platforms."""
    v = float(f"{round(float(x), 12):.12g}")
    return 0.0 if v == 0 else v


def fmt_array(a) -> list:
    a = np.asarray(a, dtype=float)
    if a.ndim == 0:
        return fmt_float(a)
    return [fmt_array(r) for r in a]


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def parse_space(data: dict) -> Space:
    try:
        return Space(data["kind"], int(data["dim"]), data.get("chart"))
    except KeyError as exc:
        raise ValidationError("schema", f"space is missing {exc.args[0]!r}") from exc


def parse_isometry(space: Space, matrix) -> Isometry:
    M = np.asarray(matrix, dtype=float)
    if space.kind == "hyperbolic" and space.dim == 2 and M.shape == (2, 2):
        return Isometry.from_mobius(space, M)
    return Isometry(space, M)


@dataclass
class Job:
    space: Space
    names: list
    generators: list
    basepoint: Point
    polyhedron: Polyhedron | None = None
    pairings: list | None = None  # (side_index, Word) pairs
    tolerance: float = TOL_GEOM
    window: Window | None = None
    word_radius: int = DEFAULT_WORD_RADIUS
    seed: int = 0
    raw: dict = field(default_factory=dict)

    @property
    def bindings(self) -> dict:
        return dict(zip(self.names, self.generators))


def parse_job(data: dict) -> Job:
    if "space" not in data:
        raise ValidationError("schema", "input needs a 'space' object")
    space = parse_space(data["space"])
    names, gens = [], []
    for k, g in enumerate(data.get("generators", [])):
        names.append(str(g.get("name", f"g{k + 1}")))
        gens.append(parse_isometry(space, g["matrix"]))
    if "basepoint" not in data:
        raise ValidationError("schema", "input needs a 'basepoint'")
    basepoint = Point(space, data["basepoint"])
    job = Job(space, names, gens, basepoint, raw=data)
    if "polyhedron" in data:
        hs = [HalfSpace.from_json(space, h) for h in data["polyhedron"].get("halfspaces", [])]
        job.polyhedron = Polyhedron(space, hs, center=basepoint.canonical)
    if "pairings" in data:
        job.pairings = [(int(p["side_index"]), Word.parse(p["generator_word"])) for p in data["pairings"]]
    if "tolerance" in data:
        job.tolerance = float(data["tolerance"])
        if job.tolerance <= 0:
            raise ValidationError("schema", "tolerance must be positive")
    if "window" in data:
        w = data["window"]
        job.window = Window(Point(space, w.get("center", data["basepoint"])), float(w["radius"]))
    job.word_radius = int(data.get("word_radius", DEFAULT_WORD_RADIUS))
    job.seed = int(data.get("seed", 0))
    return job


def load_job(path) -> Job:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError("schema", f"input is not valid JSON: {exc}") from exc
    return parse_job(data)


def word_text(word: tuple, names: list) -> str:
    """Render a signed generator index word (1-based, negative = inverse)."""
    if not word:
        return "1"
    return "*".join(names[abs(c) - 1] + ("" if c > 0 else "^-1") for c in word)


def job_dirichlet(job: Job) -> DirichletDomain:
    return dirichlet_domain(GroupInput(job.space, job.generators, job.basepoint, job.names,
                                       job.word_radius), tol=job.tolerance)


def job_pairings(job: Job):
    """Fundamental polyhedron and pairing isometries for the job."""
    if job.polyhedron is None:
        dom = job_dirichlet(job)
        return dom.polyhedron, list(dom.elements), None, None
    P = job.polyhedron
    if job.pairings is not None:
        faces = [i for i, _ in job.pairings]
        labels = [str(w) for _, w in job.pairings]
        isos = [w.evaluate(job.bindings, job.space) for _, w in job.pairings]
    else:
        faces, labels, isos = None, list(job.names), list(job.generators)
    if any(f < 0 or f >= len(P.halfspaces) for f in faces or []):
        raise ValidationError("schema", "pairing side_index out of range")
    return P, isos, faces, labels


def run_analysis(job: Job, cap: int = DEFAULT_CAP) -> Analysis:
    P, isos, faces, labels = job_pairings(job)
    if not P.is_thick():
        raise ValidationError("not_thick", "fundamental polyhedron has empty interior")
    window = job.window or Window(job.basepoint, DEFAULT_WINDOW_RADIUS)
    if job.polyhedron is not None:
        check_pairings(P, isos, window, labels, faces, job.tolerance)
    return analyze(P, close_under_inverse(isos), window, tol=job.tolerance, cap=cap)


def close_under_inverse(isos) -> list:
    out = list(isos)
    for g in isos:
        inv = g.inverse()
        if not any(iso_eq(inv, h) for h in out):
            out.append(inv)
    return out


def isometry_json(g: Isometry) -> dict:
    out = {"matrix": fmt_array(g.matrix)}
    if g.mobius is not None:
        out["mobius"] = fmt_array(g.mobius)
    return out


def presentation_json(pres: Presentation) -> dict:
    return {
        "generators": [{"symbol": s, **isometry_json(g)} for s, g in pres.generators],
        "relations": [str(r) for r in pres.relations],
    }


def presentation_gap(pres: Presentation) -> str:
    syms = pres.symbols
    lines = []
    if syms:
        lines.append("F := FreeGroup(" + ", ".join(f'"{s}"' for s in syms) + ");")
        lines.append(" ".join(f"{s} := F.{i + 1};" for i, s in enumerate(syms)))
    else:
        lines.append("F := FreeGroup(0);")
    lines.append("rels := [" + ", ".join(str(r) for r in pres.relations) + "];")
    lines.append("G := F / rels;")
    return "\n".join(lines) + "\n"


def polyhedron_json(P: Polyhedron) -> dict:
    return {"halfspaces": [{"normal": fmt_array(h.normal), "offset": fmt_float(h.offset)}
                           for h in P.halfspaces]}


def space_json(space: Space) -> dict:
    return {"kind": space.kind, "dim": space.dim, "chart": space.chart}


def dirichlet_json(job: Job, dom: DirichletDomain) -> dict:
    """Output that can be fed back as input with the polyhedron-first entry point."""
    data = {k: v for k, v in job.raw.items() if k not in ("polyhedron", "pairings")}
    data["polyhedron"] = polyhedron_json(dom.polyhedron)
    data["pairings"] = [{"side_index": i, "generator_word": word_text(w, job.names)}
                        for i, w in enumerate(dom.words)]
    data["stable"] = dom.stable
    data["word_radius"] = dom.word_radius
    data["near_identity"] = [word_text(w, job.names) for w in dom.near_identity]
    return data


def parse_element(job: Job, value) -> Isometry:
    if isinstance(value, str):
        return Word.parse(value).evaluate(job.bindings, job.space)
    try:
        return parse_isometry(job.space, value)
    except GeometryError as exc:
        raise ValidationError("schema", f"element is not an isometry: {exc}") from exc
