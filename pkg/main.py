"""
CDS Bench CLI v1.0

Подкоманды:
    gen      - сгенерировать граф BA/ER в текстовый формат
    solve    - один солвер (semo, gsemo, greedy, exact) на одном графе
    bench    - эксперимент: инстансы × солверы × бюджеты × повторы → CSV
    summary  - сводка по CSV прогона

Коды выхода: 0 - всё допустимо, 2 - есть недопустимые результаты, 1 - ошибка использования/IO.

Примеры:
    python main.py gen --model ba --n 20 --seed 1 --out ba20.txt
    python main.py solve --algo semo --graph ba20.txt --budget T1 --seed 0
    python main.py bench --model ba --sizes 10 15 20 --solvers semo greedy exact \\
        --budgets T1 T2 --replicates 20 --out results.csv
    python main.py summary --csv results.csv
"""

import argparse
import csv
import json
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from baselines import OracleLimitError, exact_min_cds, greedy_cds
from bench import EA_SOLVERS, SOLVERS, ExperimentSpec, run_experiment, summarize
from config import DEFAULT_SEED, TRACE_EVERY, WORKERS, describe_config
from evo_engine import BUDGET_PRESETS, RunConfig, run
from generators import GeneratorError, GenSpec, generate
from graph_core import GraphError, format_graph, is_cds, members_of, read_graph, write_graph
from objectives import ratio_bound
from service_logger import slog

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2


class CliParser(argparse.ArgumentParser):
    """argparse выходит с 2 на ошибке разбора, а 2 у нас - недопустимый результат"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# ==========================================
# gen
# ==========================================

def cmd_gen(args) -> int:
    spec = GenSpec(model=args.model, n=args.n, seed=args.seed, er_p=args.p, max_retries=args.max_retries)
    g = generate(spec)
    comment = f"model={spec.model.value} n={spec.n} seed={spec.seed}"
    if spec.model.value == "er":
        comment += f" p={spec.p:.6f}"

    if args.out:
        write_graph(g, args.out, comment=comment)
        slog.info("GEN", "WRITTEN", f"{spec.instance_id}: {g.n} вершин, {g.m} рёбер → {args.out}")
    else:
        sys.stdout.write(format_graph(g, comment=comment))
    return EXIT_OK


# ==========================================
# solve
# ==========================================

def _write_trace(path: str, trace):
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["iteration", "best_size", "archive_size", "potential_k"])
        for tp in trace:
            writer.writerow([tp.iteration, "" if tp.best_size is None else tp.best_size,
                             tp.archive_size, "" if tp.potential_k is None else tp.potential_k])


def cmd_solve(args) -> int:
    g = read_graph(args.graph)
    g.validate_for_solver()

    exact = exact_min_cds(g) if (args.diagnostics or args.algo == "exact") else None
    m = exact.m if exact else None

    payload = {"graph": args.graph, "n": g.n, "delta": g.max_degree, "algo": args.algo}

    if args.algo in EA_SOLVERS:
        trace_every = args.trace_every
        if args.trace and not trace_every:
            trace_every = g.n
        cfg = RunConfig(algorithm=args.algo, budget=args.budget, seed=args.seed,
                        trace_every=trace_every, diagnostics_m=m if args.diagnostics else None)
        report = run(g, cfg)
        solution = report.solution
        payload.update(report.to_dict())
        print(f"Бюджет: {report.budget} ({args.budget}), seed={args.seed}")
        print(f"Первое допустимое: {report.first_feasible_iteration if report.feasible else '-'}")
        print(f"Архив в конце: {report.final_archive}")
        print(f"Время: {report.wall_time:.3f}s")
        if args.trace:
            _write_trace(args.trace, report.trace)
    elif args.algo == "greedy":
        solution, steps = greedy_cds(g)
        payload["steps"] = [[s.chosen_vertex, s.f1_before, s.f1_after] for s in steps]
        print(f"Шаги (v, f1 до, f1 после): {payload['steps']}")
    else:
        solution = exact.optimum
        payload["subsets_examined"] = exact.subsets_examined
        print(f"Перебрано подмножеств: {exact.subsets_examined}")

    # Независимая проверка перед отчётом
    feasible = solution is not None and is_cds(g, solution)
    if solution is not None and not feasible:
        slog.error("CLI", "NOT_CDS", f"{args.algo} вернул множество, не являющееся CDS",
                   extra={"set": members_of(solution)})

    size = int(np.count_nonzero(solution)) if feasible else None
    payload.update({"size": size, "feasible": feasible, "solution": members_of(solution) if feasible else None, "m": m})

    print(f"Граф: n={g.n}, |E|={g.m}, Δ={g.max_degree}")
    if feasible:
        print(f"✓ CDS размера {size}: {members_of(solution)}")
        if m:
            ratio = size / m
            payload["ratio"] = ratio
            print(f"m={m}, ratio={ratio:.3f} (граница 2+lnΔ = {ratio_bound(g.max_degree):.3f})")
    else:
        print("✗ Допустимого решения нет (бюджет слишком мал?)")

    if args.json:
        Path(args.json).write_text(json.dumps(payload, indent=2, ensure_ascii=False), encoding="utf-8")

    return EXIT_OK if feasible else EXIT_INFEASIBLE


# ==========================================
# bench
# ==========================================

def cmd_bench(args) -> int:
    corpus: List = []
    if args.model:
        for n in args.sizes or []:
            for k in range(args.instances):
                corpus.append(GenSpec(model=args.model, n=n, seed=args.instance_seed + k, er_p=args.p))
    corpus.extend(args.graph or [])
    if not corpus:
        raise ValueError("Пустой корпус: нужны --model с --sizes и/или --graph")

    spec = ExperimentSpec(
        corpus=corpus,
        solvers=args.solvers,
        budgets=args.budgets,
        replicates=args.replicates,
        base_seed=args.base_seed,
        output=Path(args.out),
        json_output=Path(args.json) if args.json else None,
        use_oracle=not args.no_oracle,
        workers=args.workers,
    )
    rows = run_experiment(spec)

    infeasible = sum(not r.feasible for r in rows)
    print(f"{len(rows)} строк → {args.out}; недопустимых: {infeasible}")
    return EXIT_INFEASIBLE if infeasible else EXIT_OK


# ==========================================
# summary
# ==========================================

def cmd_summary(args) -> int:
    import pandas as pd

    summary, ea_vs_greedy, gap = summarize(args.csv)
    with pd.option_context("display.max_rows", None, "display.width", 200):
        print(summary.to_string(index=False))
        if not ea_vs_greedy.empty:
            print()
            print(ea_vs_greedy.to_string(index=False))
        if not gap.empty:
            print()
            print(gap.to_string(index=False))
    return EXIT_OK


# ==========================================
# ПАРСЕР
# ==========================================

def _budget_arg(value: str) -> str:
    label = value.strip().upper()
    if label in BUDGET_PRESETS:
        return label
    try:
        if int(label) < 0:
            raise ValueError
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"ожидается {'|'.join(BUDGET_PRESETS)} или неотрицательное целое, получено {value!r}") from None
    return label


def build_parser() -> CliParser:
    parser = CliParser(prog="cds", description="MinCDS: SEMO/GSEMO, greedy, точный оракул, эксперименты")
    parser.add_argument("--log-level", default=None, help="DEBUG|INFO|WARNING|ERROR|CRITICAL")
    parser.add_argument("--log-file", default=None, help="JSON-lines лог")
    parser.add_argument("--show-config", action="store_true", help="напечатать конфигурацию в stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=CliParser)

    p_gen = sub.add_parser("gen", help="сгенерировать граф")
    p_gen.add_argument("--model", choices=["ba", "er"], required=True)
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_gen.add_argument("--p", type=float, default=None, help="вероятность ребра ER (по умолчанию ln n / n)")
    p_gen.add_argument("--max-retries", type=int, default=1000)
    p_gen.add_argument("--out", default=None, help="файл (по умолчанию stdout)")
    p_gen.set_defaults(func=cmd_gen)

    p_solve = sub.add_parser("solve", help="запустить один солвер")
    p_solve.add_argument("--algo", choices=list(SOLVERS), required=True)
    p_solve.add_argument("--graph", required=True)
    p_solve.add_argument("--budget", type=_budget_arg, default="T1")
    p_solve.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_solve.add_argument("--trace", default=None, help="CSV трассы")
    p_solve.add_argument("--trace-every", type=int, default=TRACE_EVERY)
    p_solve.add_argument("--diagnostics", action="store_true", help="m из оракула, потенциал K в трассе")
    p_solve.add_argument("--json", default=None, help="JSON отчёт")
    p_solve.set_defaults(func=cmd_solve)

    p_bench = sub.add_parser("bench", help="эксперимент → CSV")
    p_bench.add_argument("--model", choices=["ba", "er"], default=None)
    p_bench.add_argument("--sizes", type=int, nargs="+", default=None)
    p_bench.add_argument("--instances", type=int, default=1, help="инстансов на размер")
    p_bench.add_argument("--instance-seed", type=int, default=DEFAULT_SEED)
    p_bench.add_argument("--p", type=float, default=None)
    p_bench.add_argument("--graph", nargs="+", default=None, help="файлы графов")
    p_bench.add_argument("--solvers", nargs="+", choices=list(SOLVERS), default=["semo", "greedy"])
    p_bench.add_argument("--budgets", nargs="+", type=_budget_arg, default=["T1"])
    p_bench.add_argument("--replicates", type=int, default=1)
    p_bench.add_argument("--base-seed", type=int, default=DEFAULT_SEED)
    p_bench.add_argument("--out", required=True)
    p_bench.add_argument("--json", default=None)
    p_bench.add_argument("--no-oracle", action="store_true")
    p_bench.add_argument("--workers", type=int, default=WORKERS)
    p_bench.set_defaults(func=cmd_bench)

    p_summary = sub.add_parser("summary", help="сводка по CSV")
    p_summary.add_argument("--csv", required=True)
    p_summary.set_defaults(func=cmd_summary)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    slog.configure(level=args.log_level, file_path=args.log_file)
    if args.show_config:
        print(describe_config(), file=sys.stderr)

    try:
        return args.func(args)
    except (GraphError, GeneratorError, OracleLimitError, ValueError, OSError) as e:
        slog.error("CLI", f"{args.command.upper()}_FAIL", f"{type(e).__name__}: {e}")
        print(f"✗ {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
