"""
iwasawa-lab command line

Every command reads one input document (a path or ``corpus:<tag>``), prints a
rich table or, with ``--json``, deterministic JSON on stdout, and exits with
0 on success, 1 when the mathematics says no (a failed check, a violated
cocycle condition, a non-cocompact subgroup) and 2 on malformed input.
"""

import functools
from typing import Any, Callable, Dict, List, Optional, Sequence

import structlog
import typer
from rich.console import Console
from rich.table import Table

from iwasawa_lab.config import get_settings
from iwasawa_lab.graph.verify_suite import run_suite_sync
from iwasawa_lab.models.documents import (
    CEAlgebraDocument,
    ConstructDocument,
    HeisenbergDocument,
    InputDocument,
    TorusDocument,
)
from iwasawa_lab.models.report import SuiteReport
from iwasawa_lab.services.ce_cohomology import (
    CEAlgebra,
    betti_numbers,
    euler_characteristic,
    frolicher_pages,
    poincare_duality_holds,
)
from iwasawa_lab.services.chern import bracket_consistency, chern_form, verify_holomorphic_type
from iwasawa_lab.services.errors import (
    CocycleConditionViolated,
    InputDocumentError,
    IwasawaLabError,
    NotCocompactError,
)
from iwasawa_lab.services.heisenberg import (
    HeisLattice,
    construct_iwasawa,
    extract_iwasawa,
    q_generates_gamma,
    validate_lattice,
)
from iwasawa_lab.services.tori_hodge import (
    TorusJ,
    cm_field,
    cm_report,
    decompose_isogeny,
    endomorphism_algebra,
    endomorphism_order,
    enumerate_elliptic_subtori,
    h20_02_dim,
    picard_number,
)
from iwasawa_lab.tools import CHECK_ORDER
from iwasawa_lab.utils.codec import dumps, encode_quad, encode_real, jsonable, rows_to_strings
from iwasawa_lab.utils.load_input import list_corpus, load_input, resolve_source
from iwasawa_lab.utils.logging import configure_logging

logger = structlog.get_logger(__name__)

app = typer.Typer(help="Exact computations on Iwasawa manifolds and their lattices", no_args_is_help=True, add_completion=False)
lattice_app = typer.Typer(help="Lattices in the complex Heisenberg group", no_args_is_help=True)
iwasawa_app = typer.Typer(help="Lattice data (Δ, Γ, q) of Iwasawa manifolds", no_args_is_help=True)
torus_app = typer.Typer(help="Complex tori and their Hodge data", no_args_is_help=True)
cohomology_app = typer.Typer(help="Cohomology of invariant-form models", no_args_is_help=True)
chern_app = typer.Typer(help="The Chern class of the Iwasawa bundle", no_args_is_help=True)
corpus_app = typer.Typer(help="Bundled example documents", no_args_is_help=True)

app.add_typer(lattice_app, name="lattice")
app.add_typer(iwasawa_app, name="iwasawa")
app.add_typer(torus_app, name="torus")
app.add_typer(cohomology_app, name="cohomology")
app.add_typer(chern_app, name="chern")
app.add_typer(corpus_app, name="corpus")

console = Console()
err_console = Console(stderr=True)

EXIT_OK, EXIT_FAIL, EXIT_MALFORMED = 0, 1, 2

SourceArg = typer.Argument(..., help="Input document: a path or corpus:<tag>")
JsonOpt = typer.Option(False, "--json", help="Print deterministic JSON instead of a table")


@app.callback()
def main(
    log_level: Optional[str] = typer.Option(None, "--log-level", help="Log level for stderr (default from settings)"),
):
    settings = get_settings()
    configure_logging(log_level or settings.log_level, settings.log_json)


# ------------------------------------------------------------------ helpers


def failure_payload(error: IwasawaLabError) -> Dict[str, Any]:
    if isinstance(error, CocycleConditionViolated):
        return {
            "error": "cocycle condition violated",
            "pair": [[str(z) for z in v] for v in error.pair],
            "value": str(error.value),
            "indices": list(error.indices) if error.indices else None,
        }
    if isinstance(error, NotCocompactError):
        return {"error": "not cocompact", "which": error.which, "rank": error.rank, "expected": error.expected}
    return {"error": str(error), "type": type(error).__name__}


def cli_errors(fn: Callable) -> Callable:
    """Map library errors to exit codes; mathematical refusals exit 1, the rest 2"""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        json_output = kwargs.get("json_output", False)
        try:
            return fn(*args, **kwargs)
        except (CocycleConditionViolated, NotCocompactError) as e:
            payload = failure_payload(e)
            if json_output:
                typer.echo(dumps(payload))
            else:
                err_console.print(f"[bold red]{payload['error']}[/]: {e}")
            raise typer.Exit(EXIT_FAIL)
        except (IwasawaLabError, ValueError, KeyError) as e:
            logger.debug("command failed", error=str(e), type=type(e).__name__)
            if json_output:
                typer.echo(dumps(failure_payload(e) if isinstance(e, IwasawaLabError) else {"error": str(e), "type": type(e).__name__}))
            else:
                err_console.print(f"[bold red]error[/]: {e}")
            raise typer.Exit(EXIT_MALFORMED)

    return wrapper


def emit(payload: Any, json_output: bool, render: Optional[Callable[[Any], None]] = None):
    if json_output or render is None:
        typer.echo(dumps(payload))
    else:
        render(payload)


def print_table(title: str, columns: Sequence[str], rows: Sequence[Sequence[Any]]):
    table = Table(title=title)
    for column in columns:
        table.add_column(column)
    for row in rows:
        table.add_row(*(str(x) for x in row))
    console.print(table)


def print_mapping(title: str, payload: Dict[str, Any]):
    print_table(title, ["field", "value"], [(k, v if not isinstance(v, (dict, list)) else dumps(v)) for k, v in payload.items()])


def _expect(document: InputDocument, *kinds: type) -> None:
    if not isinstance(document, kinds):
        names = ", ".join(k.model_fields["kind"].default for k in kinds)
        raise InputDocumentError(f"expected a document of kind {names}, got {document.kind}")


def lattice_of(document: InputDocument) -> HeisLattice:
    _expect(document, HeisenbergDocument, ConstructDocument)
    if isinstance(document, HeisenbergDocument):
        return validate_lattice(document.points())
    return construct_iwasawa(*document.lattice_data())


def torus_of(document: InputDocument) -> TorusJ:
    if isinstance(document, TorusDocument):
        return document.torus()
    return lattice_of(document).base_torus()


def algebra_of(document: InputDocument) -> CEAlgebra:
    _expect(document, CEAlgebraDocument)
    return document.algebra()


def heisenberg_document(lattice: HeisLattice) -> Dict[str, Any]:
    """A heisenberg document for the generators of a lattice"""
    return {
        "version": 1,
        "kind": "heisenberg",
        "field": {"d": lattice.field.d},
        "generators": [{name: encode_quad(getattr(p, name)) for name in ("a", "b", "c")} for p in lattice.generators],
    }


def torus_document(torus: TorusJ) -> Dict[str, Any]:
    """A torus document for J, each entry carrying its real field"""
    return {
        "version": 1,
        "kind": "torus",
        "g": torus.g,
        "J": [[encode_real(x) for x in row] for row in torus.J],
    }


# ------------------------------------------------------------------ lattice


@lattice_app.command("validate")
@cli_errors
def lattice_validate(source: str = SourceArg, json_output: bool = JsonOpt):
    """Decide whether the generators span a cocompact lattice"""
    lattice = lattice_of(load_input(source))
    payload = {
        "valid": True,
        "d": lattice.field.d,
        "generators": len(lattice.generators),
        "delta": lattice.delta.to_dict(),
        "gamma": lattice.gamma.to_dict(),
    }
    emit(payload, json_output, lambda p: print_mapping(f"lattice {source}", p))


# ------------------------------------------------------------------ iwasawa


@iwasawa_app.command("extract")
@cli_errors
def iwasawa_extract(source: str = SourceArg, json_output: bool = JsonOpt):
    """(Δ, Γ, q) of a lattice"""
    data = extract_iwasawa(lattice_of(load_input(source)))
    payload = {**data.to_dict(), "q_spans_center": q_generates_gamma(data)}
    emit(payload, json_output, lambda p: print_mapping(f"iwasawa data {source}", p))


@iwasawa_app.command("construct")
@cli_errors
def iwasawa_construct(source: str = SourceArg, json_output: bool = JsonOpt):
    """Build the lattice from (Δ, Γ); a violated cocycle condition exits 1 with the witness"""
    document = load_input(source)
    _expect(document, ConstructDocument)
    lattice = construct_iwasawa(*document.lattice_data())
    payload = {"lattice": lattice.to_dict(), "document": heisenberg_document(lattice)}
    emit(payload, json_output, lambda p: print_mapping(f"constructed lattice {source}", p["lattice"]))


# -------------------------------------------------------------------- torus


@torus_app.command("structure")
@cli_errors
def torus_structure(source: str = SourceArg, json_output: bool = JsonOpt):
    """The complex structure J, as a torus document with self-describing entries"""
    torus = torus_of(load_input(source))
    payload = {"g": torus.g, "document": torus_document(torus)}
    emit(
        payload,
        json_output,
        lambda p: print_table(
            f"J on R^{2 * torus.g}", [str(j) for j in range(torus.dim)], [[str(x) for x in row] for row in torus.J]
        ),
    )


@torus_app.command("endos")
@cli_errors
def torus_endos(source: str = SourceArg, json_output: bool = JsonOpt):
    """ℚ-basis of End(T) ⊗ ℚ"""
    torus = torus_of(load_input(source))
    algebra = endomorphism_algebra(torus)
    payload = {"g": torus.g, "end_dim": algebra.dim, "basis": [rows_to_strings(m) for m in algebra.basis]}
    emit(
        payload,
        json_output,
        lambda p: print_table(f"End(T) ⊗ Q, dimension {p['end_dim']}", ["#", "matrix"], [(i, m) for i, m in enumerate(p["basis"])]),
    )


@torus_app.command("picard")
@cli_errors
def torus_picard(source: str = SourceArg, json_output: bool = JsonOpt):
    """Picard number and the rational (2,0)+(0,2) dimension"""
    torus = torus_of(load_input(source))
    payload = {"g": torus.g, "rho": picard_number(torus), "h20_02": h20_02_dim(torus), "max_rho": torus.g * torus.g}
    emit(payload, json_output, lambda p: print_mapping(f"Picard data {source}", p))


@torus_app.command("cm")
@cli_errors
def torus_cm(source: str = SourceArg, json_output: bool = JsonOpt):
    """The CM conditions; for curves also the CM field and order"""
    torus = torus_of(load_input(source))
    payload = cm_report(torus).to_dict()
    if torus.g == 1:
        field = cm_field(torus)
        payload["field"] = field.label if field else None
        if field is not None and torus.is_klattice_backed():
            payload["order"] = endomorphism_order(torus).to_dict()
    emit(payload, json_output, lambda p: print_mapping(f"CM report {source}", p))


@torus_app.command("subtori")
@cli_errors
def torus_subtori(
    source: str = SourceArg,
    height: Optional[int] = typer.Option(None, "--height", help="Line height bound (default from settings)"),
    json_output: bool = JsonOpt,
):
    """Elliptic subtori of a surface up to a height, and an isogeny splitting"""
    torus = torus_of(load_input(source))
    bound = height or get_settings().default_height
    subtori = enumerate_elliptic_subtori(torus, bound)
    payload = {
        "height": bound,
        "count": len(subtori),
        "subtori": [s.to_dict() for s in subtori],
        "isogeny": decompose_isogeny(torus).to_dict(),
    }
    emit(
        payload,
        json_output,
        lambda p: print_table(
            f"{p['count']} elliptic subtori of height ≤ {bound}",
            ["line", "height", "covolume ratio"],
            [(", ".join(s["line"]), s["height"], s["covolume_ratio"]) for s in p["subtori"]],
        ),
    )


# --------------------------------------------------------------- cohomology


@cohomology_app.command("betti")
@cli_errors
def cohomology_betti(source: str = SourceArg, json_output: bool = JsonOpt):
    """de Rham Betti numbers of the model"""
    betti = betti_numbers(algebra_of(load_input(source)))
    payload = {
        "betti": betti,
        "euler_characteristic": euler_characteristic(betti),
        "poincare_duality": poincare_duality_holds(betti),
    }
    emit(payload, json_output, lambda p: typer.echo(" ".join(str(b) for b in p["betti"])))


@cohomology_app.command("frolicher")
@cli_errors
def cohomology_frolicher(
    source: str = SourceArg,
    rmax: Optional[int] = typer.Option(None, "--rmax", help="Last page (default from settings)"),
    json_output: bool = JsonOpt,
):
    """Dimensions of the spectral sequence pages E_1 … E_rmax"""
    pages = frolicher_pages(algebra_of(load_input(source)), rmax or get_settings().default_rmax)
    payload = pages.to_dict()

    def render(p: Dict[str, Any]):
        rows: List[List[Any]] = []
        for r, table in p["pages"].items():
            rows.append([f"E{r}", p["totals"][r], " ".join(f"{k}:{v}" for k, v in table.items() if v)])
        rows.append(["betti", sum(p["betti"]), " ".join(str(b) for b in p["betti"])])
        print_table(f"spectral sequence, degenerates at {p['degenerates_at']}", ["page", "total", "nonzero (p,q):dim"], rows)

    emit(payload, json_output, render)


# -------------------------------------------------------------------- chern


@chern_app.command("check")
@cli_errors
def chern_check(source: str = SourceArg, json_output: bool = JsonOpt):
    """q is alternating, K-bilinear and nondegenerate; exits 1 otherwise"""
    form = chern_form(extract_iwasawa(lattice_of(load_input(source))))
    certificate = verify_holomorphic_type(form)
    payload = {**certificate.to_dict(), "bracket_consistent": bracket_consistency(form), "form": form.to_dict()}
    emit(payload, json_output, lambda p: print_mapping(f"Chern class {source}", {k: v for k, v in p.items() if k != "form"}))
    if not (certificate.passed and payload["bracket_consistent"]):
        raise typer.Exit(EXIT_FAIL)


# ------------------------------------------------------------------- verify


def render_suite(suite: SuiteReport):
    print_table(
        f"{suite.subject}: {suite.verdict.value}",
        ["check", "verdict", "claim", "ms"],
        [(r.name, r.verdict.value, r.claim, f"{r.elapsed_ms:.1f}") for r in suite.reports],
    )
    for report in suite.reports:
        if report.verdict.value != "pass":
            err_console.print(f"[bold]{report.name}[/]: {dumps(report.witnesses)}")


@app.command("verify")
@cli_errors
def verify(
    check: str = typer.Argument(..., help=f"all, or one of: {', '.join(CHECK_ORDER)}"),
    source: str = SourceArg,
    height: Optional[int] = typer.Option(None, "--height", help="Line height bound"),
    rmax: Optional[int] = typer.Option(None, "--rmax", help="Last spectral sequence page"),
    json_output: bool = JsonOpt,
):
    """Run verification checks on a document"""
    if check != "all" and check not in CHECK_ORDER:
        raise InputDocumentError(f"unknown check {check!r}; choose all or one of {', '.join(CHECK_ORDER)}")
    document = load_input(source)
    suite = run_suite_sync(document, source, None if check == "all" else [check], height=height, rmax=rmax)
    emit(jsonable(suite.summary()), json_output, lambda _: render_suite(suite))
    raise typer.Exit(suite.exit_code)


# ------------------------------------------------------------------- corpus


@corpus_app.command("list")
@cli_errors
def corpus_list(json_output: bool = JsonOpt):
    """Tags, kinds and descriptions of the bundled documents"""
    entries = list_corpus()
    payload = [{"tag": tag, "kind": kind, "description": description} for tag, kind, description in entries]
    emit(payload, json_output, lambda p: print_table("corpus", ["tag", "kind", "description"], [tuple(e.values()) for e in p]))


@corpus_app.command("emit")
@cli_errors
def corpus_emit(name: str = typer.Argument(..., help="Corpus tag")):
    """Print a bundled document"""
    path = resolve_source(name if name.startswith("corpus:") else f"corpus:{name}")
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InputDocumentError(f"cannot read corpus entry: {e.strerror or e}", location=str(path)) from e
    typer.echo(text.rstrip("\n"))


if __name__ == "__main__":
    app()
