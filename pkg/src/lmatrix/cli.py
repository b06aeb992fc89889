from __future__ import annotations

import csv
import datetime as dt
import subprocess
import sys
import time
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, List, Optional

import typer
from rich.console import Console
from rich.progress import BarColumn, Progress, TextColumn
from rich.prompt import Prompt
from rich.table import Table

from .errors import LMatrixError, RankTooLarge

app = typer.Typer(add_completion=False)
words_app = typer.Typer(add_completion=False, help="Words in the universal Coxeter group.")
app.add_typer(words_app, name="words")
console = Console()


@app.callback(invoke_without_command=True)
def _default_command(ctx: typer.Context) -> None:
    if ctx.invoked_subcommand is None and not ctx.resilient_parsing:
        start()


def _run_self(args: list[str]) -> int:
    """Run this CLI as a subprocess (keeps the start menu simple)."""
    cmd = [sys.executable, "-m", "lmatrix", *args]
    proc = subprocess.run(cmd)
    return int(proc.returncode or 0)


def _cfg():
    from .config import load_config

    return load_config()


def _now() -> dt.datetime:
    return dt.datetime.now(dt.timezone.utc)


def _ensure_log(path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    if not path.exists():
        with path.open("w", newline="", encoding="utf-8") as f:
            w = csv.writer(f)
            w.writerow([
                "ts_utc",
                "command",
                "input",
                "exit_code",
                "duration_s",
                "summary",
            ])


def _append_log(path: Path, row: List[str]) -> None:
    _ensure_log(path)
    with path.open("a", newline="", encoding="utf-8") as f:
        csv.writer(f).writerow(row)


@contextmanager
def _guard() -> Iterator[None]:
    """Turn library errors into a one-line message and the matching exit code."""
    try:
        yield
    except LMatrixError as e:
        console.print(f"[red]error[/red] {type(e).__name__}: {e}", highlight=False)
        raise typer.Exit(e.exit_code)


INPUT_OPT = typer.Option(None, "--input", help="JSON/YAML file with n, B and optional D.")
EXAMPLE_OPT = typer.Option("", "--example", help="Bundled example name (see `lmatrix examples`).")
SEQ_OPT = typer.Option("", "--seq", help="Mutation sequence, e.g. 2,3,2,1,2.")
ORDERING_OPT = typer.Option("", "--ordering", help='Linear ordering, e.g. "1<2<3" or "1>2>3".')
OUT_OPT = typer.Option(None, "--out", help="Write the JSON result here.")


def _load(input_path: Optional[Path], example: str):
    from .inputs import resolve_matrix

    base = resolve_matrix(input_path, example)
    limit = _cfg().max_rank
    if base.n > limit:
        raise RankTooLarge(f"rank {base.n} exceeds the limit {limit} (raise MAX_RANK in config.env)")
    return base


def _source(input_path: Optional[Path], example: str) -> str:
    return str(input_path) if input_path is not None else f"example:{example}"


def _matrix_table(title: str, rows, headers: Optional[list[str]] = None) -> Table:
    table = Table(title=title, show_header=bool(headers), header_style="bold")
    width = len(rows[0]) if rows else 0
    for h in headers or [""] * width:
        table.add_column(h, justify="right")
    for row in rows:
        table.add_row(*[str(x) for x in row])
    return table


def _emit(obj, out: Optional[Path], quiet: bool = False) -> None:
    from .inputs import dump_json

    text = dump_json(obj, out)
    if out is not None:
        console.print(f"wrote {out}", highlight=False)
    elif not quiet:
        console.print_json(text)


@app.command()
def start() -> None:
    """Interactive start menu (arrow keys + Enter).

    Falls back to a numbered prompt if not running in a real TTY.
    """

    menu = [
        ("Mutate the rank-3 exchange matrix", ["mutate", "--example", "rank3-exchange", "--seq", "2,3,2,1,2"]),
        ("Reflection words of the dreaded torus", ["rwords", "--example", "dreaded-torus", "--seq", "2,3,4,2,1,3"]),
        ("Verify the theorem on the running example", ["verify-theorem", "--example", "running", "--all-seqs", "4"]),
        ("Probe the conjectures on the dreaded torus", ["verify-conj", "--example", "dreaded-torus", "--max-len", "5"]),
        ("Self-check", ["doctor"]),
        ("Quit", []),
    ]

    labels = [m[0] for m in menu]
    idx: Optional[int] = None

    if sys.stdin.isatty() and sys.stdout.isatty():
        try:
            import questionary

            choice = questionary.select(
                "lmatrix",
                choices=labels,
                use_shortcuts=True,
            ).ask()
        except (ImportError, OSError, EOFError):
            # No usable terminal backend; use the numbered menu.
            pass
        else:
            if choice is None:
                return
            idx = labels.index(choice)

    if idx is None:
        # Fallback: numbered menu
        table = Table(title="lmatrix", show_header=True, header_style="bold")
        table.add_column("#", width=3, justify="right")
        table.add_column("Action")
        for i, (label, _) in enumerate(menu, start=1):
            table.add_row(str(i), label)
        console.print(table)
        choice2 = Prompt.ask("Select", choices=[str(i) for i in range(1, len(menu) + 1)], default="1")
        idx = int(choice2) - 1

    _, args = menu[idx]
    if not args:
        return

    console.print(f"Running: [bold]lmatrix {' '.join(args)}[/bold]")
    raise typer.Exit(_run_self(args))


@app.command()
def doctor() -> None:
    """Recompute known values and report OK/FAIL per check."""
    from .smoke import smoke_checks

    results = smoke_checks(_cfg())

    bad = 0
    for r in results:
        status = "OK" if r.ok else "FAIL"
        console.print(f"{status} {r.name}: {r.detail}", highlight=False, markup=False)
        if not r.ok:
            bad += 1

    raise typer.Exit(1 if bad else 0)


@app.command()
def examples() -> None:
    """List the bundled example matrices."""
    from .catalog import CATALOG

    table = Table(title="examples", show_header=True, header_style="bold")
    table.add_column("name")
    table.add_column("n", justify="right")
    table.add_column("ordering")
    table.add_column("seq")
    table.add_column("note")
    for name in sorted(CATALOG):
        e = CATALOG[name]
        table.add_row(name, str(len(e.b)), e.ordering, ",".join(map(str, e.seq)), e.note)
    console.print(table)


@app.command()
def mutate(
    input_path: Optional[Path] = INPUT_OPT,
    example: str = EXAMPLE_OPT,
    seq: str = SEQ_OPT,
    out: Optional[Path] = OUT_OPT,
) -> None:
    """Mutate [B | I] along a sequence and print B^w and C^w."""
    from .inputs import parse_sequence, seed_to_json
    from .matrix_core import apply_sequence, check_sign_coherent

    with _guard():
        base = _load(input_path, example)
        seed = apply_sequence(base, parse_sequence(seq, base.n))
        check_sign_coherent(seed)

    n = base.n
    headers = [f"b{j}" for j in range(1, n + 1)] + [f"c{j}" for j in range(1, n + 1)]
    console.print(_matrix_table(f"B^w | C^w  w={list(seed.w)}", seed.extended(), headers))
    console.print(f"d={list(base.d)}", highlight=False)
    if out is not None:
        _emit(seed_to_json(seed), out)


@app.command()
def cvec(
    input_path: Optional[Path] = INPUT_OPT,
    example: str = EXAMPLE_OPT,
    seq: str = SEQ_OPT,
    ordering: str = ORDERING_OPT,
) -> None:
    """c-vectors with their signs; with --ordering also q(c_i) and the Lösung check."""
    from .gim import gim_from_ordering, is_loesung
    from .inputs import parse_ordering, parse_sequence
    from .matrix_core import apply_sequence, row_sign

    with _guard():
        base = _load(input_path, example)
        seed = apply_sequence(base, parse_sequence(seq, base.n))
        gim = gim_from_ordering(base, parse_ordering(ordering, base.n)) if ordering else None

        table = Table(title=f"c-vectors w={list(seed.w)}", show_header=True, header_style="bold")
        table.add_column("i", justify="right")
        table.add_column("c_i")
        table.add_column("sign", justify="center")
        if gim is not None:
            table.add_column("q", justify="right")
            table.add_column("Lösung", justify="center")
        for i, c in enumerate(seed.cw, start=1):
            row = [str(i), str(list(c)), "+" if row_sign(c) > 0 else "-"]
            if gim is not None:
                res = is_loesung(gim, c)
                row += [str(res.value), f"2*d_{res.k}" if res else "no"]
            table.add_row(*row)
    console.print(table)


@app.command()
def rwords(
    input_path: Optional[Path] = INPUT_OPT,
    example: str = EXAMPLE_OPT,
    seq: str = SEQ_OPT,
    word_length_cap: Optional[int] = typer.Option(None, "--word-length-cap", help="Abort when a reflection word grows past this."),
) -> None:
    """Reflection words r_i^w = g_i s_i g_i^-1 along a sequence."""
    from .coxeter_words import word_to_string
    from .inputs import parse_sequence
    from .mutation_reflections import reflection_state

    cfg = _cfg()
    with _guard():
        base = _load(input_path, example)
        st = reflection_state(base, parse_sequence(seq, base.n), word_length_cap or cfg.word_length_cap)

    table = Table(title=f"reflections w={list(st.w)}", show_header=True, header_style="bold")
    table.add_column("i", justify="right")
    table.add_column("r_i")
    table.add_column("g_i")
    table.add_column("len", justify="right")
    for i, (r, g) in enumerate(zip(st.r, st.g), start=1):
        table.add_row(str(i), word_to_string(r, compact=True), word_to_string(g, compact=True) or "e", str(len(r)))
    console.print(table)


@app.command()
def lmat(
    input_path: Optional[Path] = INPUT_OPT,
    example: str = EXAMPLE_OPT,
    seq: str = SEQ_OPT,
    ordering: str = ORDERING_OPT,
    out: Optional[Path] = OUT_OPT,
) -> None:
    """L-matrix rows l_i = g_i(alpha_i) with their quadratic-form values."""
    from .gim import gim_from_ordering, quadratic_form
    from .inputs import parse_ordering, parse_sequence
    from .mutation_reflections import l_matrix, l_matrix_sign_coherent, reflection_state

    cfg = _cfg()
    with _guard():
        base = _load(input_path, example)
        o = parse_ordering(ordering, base.n)
        gim = gim_from_ordering(base, o)
        lm = l_matrix(reflection_state(base, parse_sequence(seq, base.n), cfg.word_length_cap), gim)
        lm.check_form()

    q = [quadratic_form(gim, row) for row in lm.rows]
    coherent = l_matrix_sign_coherent(lm)
    table = Table(title=f"L-matrix ordering {o}", show_header=True, header_style="bold")
    table.add_column("i", justify="right")
    table.add_column("l_i")
    table.add_column("q", justify="right")
    table.add_column("sign-coherent", justify="center")
    for i, row in enumerate(lm.rows, start=1):
        table.add_row(str(i), str(list(row)), str(q[i - 1]), "yes" if coherent[i - 1] else "no")
    console.print(table)
    if out is not None:
        _emit(
            {
                "ordering": str(o),
                "A": [list(r) for r in gim.a],
                "L": [list(r) for r in lm.rows],
                "q": q,
                "sign_coherent": list(coherent),
            },
            out,
        )


@app.command(name="lambda-run")
def lambda_run(
    input_path: Optional[Path] = INPUT_OPT,
    example: str = EXAMPLE_OPT,
    seq: str = SEQ_OPT,
    ordering: str = ORDERING_OPT,
    show_algebra: bool = typer.Option(False, "--show-algebra/--no-show-algebra", help="Also print s_i^w and e_i^w."),
    no_relations: bool = typer.Option(False, "--no-relations", help="Skip the per-step relation checks."),
) -> None:
    """lambda_i^w with the algebra expression that produces each one."""
    from .algebra_a import render
    from .inputs import parse_ordering, parse_sequence
    from .lambda_engine import lambda_expression, run_sequence

    cfg = _cfg()
    with _guard():
        base = _load(input_path, example)
        o = parse_ordering(ordering, base.n)
        st = run_sequence(base, o, parse_sequence(seq, base.n), check=not no_relations, term_cap=cfg.term_cap)

    table = Table(title=f"lambda w={list(st.w)} ordering {o}", show_header=True, header_style="bold")
    table.add_column("i", justify="right")
    table.add_column("lambda_i")
    table.add_column("expression")
    for i, v in enumerate(st.lam, start=1):
        table.add_row(str(i), str(list(v)), lambda_expression(st, i))
    console.print(table)
    if show_algebra:
        for i in range(1, st.n + 1):
            console.print(f"s{i} = {render(st.s[i - 1])}", highlight=False, markup=False)
            console.print(f"e{i} = {render(st.e[i - 1])}", highlight=False, markup=False)


@app.command(name="gim-search")
def gim_search(
    input_path: Optional[Path] = INPUT_OPT,
    example: str = EXAMPLE_OPT,
    check: str = typer.Option("", "--check", help="Only test this ordering for the parity property."),
    brute_force: bool = typer.Option(False, "--brute-force", help="List every ordering with the parity property."),
    out: Optional[Path] = OUT_OPT,
) -> None:
    """Chordless cycles and an ordering with an odd number of positive entries on each oriented one."""
    from .gim import brute_force_ordering_search, chordless_cycles, find_admissible_ordering, gim_from_ordering, ordering_satisfies_parity
    from .inputs import parse_ordering

    cfg = _cfg()
    with _guard():
        base = _load(input_path, example)
        cycles = chordless_cycles(base)
        for c in cycles:
            kind = "oriented" if c.oriented else "unoriented"
            console.print(f"cycle {list(c.vertices)} {kind}", highlight=False)

        if check:
            o = parse_ordering(check, base.n)
            ok = ordering_satisfies_parity(base, o, cycles)
            console.print(f"{'OK' if ok else 'FAIL'} {o}", highlight=False)
            raise typer.Exit(0 if ok else 1)

        found = find_admissible_ordering(base, node_cap=cfg.search_node_cap)
        result = {"cycles": [{"vertices": list(c.vertices), "oriented": c.oriented} for c in cycles], "ordering": None}
        if found is None:
            console.print("no admissible ordering found within the search budget")
        else:
            gim = gim_from_ordering(base, found)
            console.print(f"ordering {found}", highlight=False)
            console.print(_matrix_table("GIM", gim.a))
            result.update({"ordering": str(found), "A": [list(r) for r in gim.a]})
        if brute_force:
            every = brute_force_ordering_search(base)
            console.print(f"admissible orderings: {len(every)}", highlight=False)
            result["all"] = [str(o) for o in every]
    if out is not None:
        _emit(result, out)


@app.command()
def loesung(
    input_path: Optional[Path] = INPUT_OPT,
    example: str = EXAMPLE_OPT,
    ordering: str = typer.Option("", "--ordering", help="Scan only this ordering (default: all orderings)."),
    max_len: Optional[int] = typer.Option(None, "--max-len", help="Longest mutation sequence to enumerate."),
    witness_len: int = typer.Option(0, "--witness-len", help="With --ordering, search real-Lösung witnesses up to this length."),
    out: Optional[Path] = OUT_OPT,
    log_csv: Optional[Path] = typer.Option(None, "--log-csv", help="CSV run log path."),
    quiet: bool = typer.Option(False, "--quiet", help="Summary line only."),
) -> None:
    """Check every enumerated c-vector against the quadratic form of each ordering GIM."""
    from .harness import loesung_scan
    from .inputs import parse_ordering

    cfg = _cfg()
    t0 = time.time()
    with _guard():
        base = _load(input_path, example)
        o = parse_ordering(ordering, base.n) if ordering else None
        report = loesung_scan(base, max_len if max_len is not None else cfg.max_len, o, witness_len)

    for f in [] if quiet else report.stats["fails_all"]:
        console.print(f"no GIM: c={f['c']} w={f['w']}", highlight=False)
    console.print(f"c_vectors={report.stats['c_vectors']} fails_all={len(report.stats['fails_all'])} {report.summary()}", highlight=False)
    _finish(report, "loesung", _source(input_path, example), t0, out, log_csv or cfg.run_log_path, quiet=True)


@app.command(name="verify-theorem")
def verify_theorem(
    input_path: Optional[Path] = INPUT_OPT,
    example: str = EXAMPLE_OPT,
    ordering: str = ORDERING_OPT,
    seq: str = typer.Option("", "--seq", help="Verify one sequence step by step."),
    all_seqs: Optional[int] = typer.Option(None, "--all-seqs", help="Verify every sequence up to this length."),
    jobs: Optional[int] = typer.Option(None, "--jobs", help="Worker processes for --all-seqs."),
    no_relations: bool = typer.Option(False, "--no-relations", help="Skip the per-step algebra relation checks."),
    out: Optional[Path] = OUT_OPT,
    log_csv: Optional[Path] = typer.Option(None, "--log-csv", help="CSV run log path."),
    quiet: bool = typer.Option(False, "--quiet", help="Summary line only."),
) -> None:
    """Check lambda = C, the action through B^w, and s_i = r_i mod 2 along mutation sequences."""
    from .harness import run_full_verification, verify_sequence
    from .inputs import parse_ordering, parse_sequence

    cfg = _cfg()
    t0 = time.time()
    with _guard():
        base = _load(input_path, example)
        o = parse_ordering(ordering, base.n)
        if all_seqs is None:
            report = verify_sequence(
                base, o, parse_sequence(seq, base.n), check=not no_relations,
                term_cap=cfg.term_cap, word_length_cap=cfg.word_length_cap,
            )
            if not quiet:
                table = Table(title=f"verify ordering {o}", show_header=True, header_style="bold")
                table.add_column("w")
                table.add_column("status", justify="center")
                table.add_column("failed")
                for step in report.stats["steps"]:
                    table.add_row(str(step["w"]), "OK" if step["ok"] else "FAIL", ",".join(step["failed"]))
                console.print(table)
        else:
            n = base.n
            total = 1 + sum(n * (n - 1) ** (k - 1) for k in range(1, all_seqs + 1))
            with Progress(
                TextColumn("[bold]{task.description}[/bold]"),
                BarColumn(bar_width=None),
                TextColumn("{task.completed}/{task.total}"),
                console=console,
                transient=True,
                disable=quiet,
            ) as progress:
                task_id = progress.add_task("sequences", total=total)
                report = run_full_verification(
                    base, o, all_seqs,
                    check=not no_relations,
                    jobs=jobs or cfg.jobs,
                    term_cap=cfg.term_cap,
                    word_length_cap=cfg.word_length_cap,
                    progress=lambda k: progress.advance(task_id, k),
                )

    for err in report.errors[:5]:
        console.print(f"FAIL w={err['sequence']}: {err['message']}", highlight=False, markup=False)
    console.print(report.summary(), highlight=False)
    _finish(report, "verify-theorem", _source(input_path, example), t0, out, log_csv or cfg.run_log_path, quiet=True)


@app.command(name="verify-conj")
def verify_conj(
    input_path: Optional[Path] = INPUT_OPT,
    example: str = EXAMPLE_OPT,
    ordering: str = typer.Option("", "--ordering", help="GIM ordering (default: search for one with the parity property)."),
    max_len: Optional[int] = typer.Option(None, "--max-len", help="Longest mutation sequence to enumerate."),
    out: Optional[Path] = OUT_OPT,
    log_csv: Optional[Path] = typer.Option(None, "--log-csv", help="CSV run log path."),
    quiet: bool = typer.Option(False, "--quiet", help="Summary line only."),
) -> None:
    """Probe: equal C-matrices give equal pi(r_i) and L-matrices equal up to row signs."""
    from .gim import Ordering, find_admissible_ordering
    from .harness import CANDIDATE_NOTE, probe_conjecture_C_equal_implies_pi_equal, probe_l_matrices
    from .inputs import dump_json, parse_ordering

    cfg = _cfg()
    t0 = time.time()
    with _guard():
        base = _load(input_path, example)
        if ordering:
            o = parse_ordering(ordering, base.n)
        else:
            o = find_admissible_ordering(base, node_cap=cfg.search_node_cap) or Ordering.natural(base.n)
        n_len = max_len if max_len is not None else cfg.max_len
        pi_report = probe_conjecture_C_equal_implies_pi_equal(base, o, n_len, cfg.word_length_cap)
        l_report = probe_l_matrices(base, o, n_len, cfg.word_length_cap)

    stats = pi_report.stats
    console.print(
        f"ordering {o} parity={'ok' if stats['ordering_satisfies_parity'] else 'fails'} "
        f"classes={stats['classes']} max_size={stats['max_size']} pairs={stats['pairs_compared']}",
        highlight=False,
    )
    for label, rep in (("pi", pi_report), ("l-matrix", l_report)):
        console.print(f"{label}: {rep.summary()}", highlight=False)
    candidates = len(pi_report.violations) + len(l_report.violations)
    if candidates:
        console.print(f"[yellow]{candidates} conjecture candidate(s)[/yellow]: {CANDIDATE_NOTE}")

    code = max(pi_report.exit_code, l_report.exit_code)
    combined = {"pi": pi_report.to_dict(), "l_matrix": l_report.to_dict()}
    if out is not None:
        dump_json(combined, out)
        console.print(f"wrote {out}", highlight=False)
    summary = f"pi_violations={len(pi_report.violations)} l_violations={len(l_report.violations)} classes={stats['classes']}"
    _log_run(log_csv or cfg.run_log_path, "verify-conj", _source(input_path, example), code, t0, summary)
    raise typer.Exit(code)


def _log_run(path: Path, command: str, source: str, code: int, t0: float, summary: str) -> None:
    _append_log(path, [_now().isoformat(), command, source, str(code), f"{time.time() - t0:.3f}", summary])


def _finish(report, command: str, source: str, t0: float, out: Optional[Path], log_csv: Path, quiet: bool) -> None:
    _emit(report.to_dict(), out, quiet=quiet)
    _log_run(log_csv, command, source, report.exit_code, t0, report.summary())
    raise typer.Exit(report.exit_code)


@words_app.command("reduce")
def words_reduce(
    word: str = typer.Argument(..., help='Letters, e.g. "3,4,4,1" or "3441".'),
    n: Optional[int] = typer.Option(None, "--n", help="Rank; letters must lie in 1..n."),
) -> None:
    """Free reduction: cancel adjacent equal letters."""
    from .coxeter_words import parse_word, word_to_string

    with _guard():
        w = parse_word(word, n)
    console.print(word_to_string(w) or "e", highlight=False)


@words_app.command("reflect")
def words_reflect(
    word: str = typer.Argument(..., help="g, or the word to test when --conj is not given."),
    conj: Optional[int] = typer.Option(None, "--conj", help="Print g s_i g^-1 for this i."),
) -> None:
    """Conjugate s_i by g, or tell whether a word is a reflection word."""
    from .coxeter_words import conjugate, is_reflection, parse_word, word_to_string

    with _guard():
        w = parse_word(word)
    if conj is None:
        ok = is_reflection(w)
        console.print(f"{word_to_string(w) or 'e'} {'is' if ok else 'is not'} a reflection", highlight=False)
        raise typer.Exit(0 if ok else 1)
    console.print(word_to_string(conjugate(w, conj)), highlight=False)


@words_app.command("pi-search")
def words_pi_search(
    target: str = typer.Argument(..., help="Word whose pi-image is searched for."),
    input_path: Optional[Path] = INPUT_OPT,
    example: str = EXAMPLE_OPT,
    ordering: str = ORDERING_OPT,
    max_len: int = typer.Option(7, "--max-len", help="Longest word to try."),
    limit: int = typer.Option(10, "--limit", help="Print at most this many words."),
) -> None:
    """Shortest reduced words with the same pi-matrix as the target."""
    from .coxeter_words import parse_word, search_pi_equivalent, word_to_string
    from .gim import gim_from_ordering
    from .inputs import parse_ordering

    cfg = _cfg()
    with _guard():
        base = _load(input_path, example)
        gim = gim_from_ordering(base, parse_ordering(ordering, base.n))
        found = search_pi_equivalent(parse_word(target, base.n), gim.a, max_len, node_cap=cfg.search_node_cap)

    for w in found[:limit]:
        console.print(f"{len(w):>3} {word_to_string(w, compact=True) or 'e'}", highlight=False)
    console.print(f"found={len(found)}", highlight=False)
