"""
main.py
=======
Punto de entrada de la línea de comandos.

SUBCOMANDOS:
    check              valida configuración, hipótesis y factibilidad del kernel
    solve              resuelve V^M para un grado y exporta policy.csv
    simulate           simula la cadena: consistencia local, ⟨W^M⟩ y W^M(N̄)
    study              estudio de convergencia sobre todos los grados → study.csv
    bench-brownian     benchmark Browniano contra el oráculo exacto → benchmark.csv
    demo-pathological  demostración de la difusión dependiente de la malla

CÓDIGOS DE SALIDA:
    0 éxito, 1 configuración, 2 kernel infactible, 3 límite de recursos,
    4 E/S, 5 la verificación del subcomando no se cumplió

EJEMPLO:
    python main.py study --config config/project_config.json --seed 7 --workers 4
"""

# ============================================================
# SECCIÓN 1: IMPORTACIONES
# ============================================================

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from src.analysis.benchmarks import run_brownian_benchmark, run_pathological_demo
from src.analysis.study import run_study
from src.chain.diagnostics import (
    consistency_suite,
    qv_bound_constant,
    reconstruct_noise,
    terminal_noise_statistics,
)
from src.chain.kernel import TransitionKernel, simulate_chain, validate_kernel
from src.data.config import DEFAULT_CONFIG_PATH, ProblemConfig, load_config, resolve_seed
from src.data.report_writer import ReportBundle, emit_reports
from src.errors import DelayMcaError
from src.model.coefficients import validate_assumptions
from src.solver.dynamic_programming import bellman_residual, solve_dp
from src.solver.monte_carlo import evaluate_policy_mc

logger = logging.getLogger('delay_mca')

CHECK_FAILED = 5


# ============================================================
# SECCIÓN 2: SUBCOMANDOS
# ============================================================

def _degree(config: ProblemConfig, requested: Optional[int]) -> int:
    return requested if requested is not None else config.degrees[0]


def cmd_check(config: ProblemConfig, args) -> int:
    coeffs = config.build_coefficients()
    assumptions = validate_assumptions(coeffs, config.assumption_samples, args.seed)
    print(assumptions.to_frame().to_string(index=False))
    infeasible = []
    for M in config.degrees:
        kernel = TransitionKernel(coeffs, config.build_grid(M))
        report = validate_kernel(kernel, sample_count=config.assumption_samples, seed=args.seed)
        status = '✅' if report.feasible else '❌'
        print(f"{status} M={M}: h={report.h:.6g}, margen quieto={report.stay_margin:.4g}, "
              f"margen ramas={report.branch_margin:.4g}, h*={report.h_star:.6g}")
        if not report.feasible:
            infeasible.append(M)
    if infeasible:
        logger.error(f"❌ Kernel infactible para M ∈ {infeasible}")
        return 2
    return 0 if assumptions.passed else CHECK_FAILED


def cmd_solve(config: ProblemConfig, args) -> int:
    problem = config.build_problem(_degree(config, args.degree))
    result = solve_dp(problem)
    print(f"V^M(φ) = {result.value:.17g}  (M={result.M}, {result.state_total:,} estados)")
    residual = bellman_residual(problem, result.table)
    logger.info(f"📊 Residuo de Bellman: {residual:.3g}")
    if args.evaluate:
        estimate = evaluate_policy_mc(problem, result.policy, config.paths, args.seed, args.workers)
        print(f"W^M(φ, u*) ≈ {estimate.mean:.10g} ± {estimate.stderr:.3g}")
    emit_reports(ReportBundle(policy=result.table.to_frame()), args.out, names=['policy'])
    return 0


def cmd_simulate(config: ProblemConfig, args) -> int:
    problem = config.build_problem(_degree(config, args.degree))
    kernel = problem.kernel
    controls = problem.controls
    control = controls[controls.index_of(args.control)] if args.control else controls[0]
    steps = problem.horizon_steps
    sequence = [control] * steps

    consistency = consistency_suite(kernel, config.assumption_samples, args.seed)
    chain = simulate_chain(kernel, sequence, problem.initial, steps, args.seed)
    noise = reconstruct_noise(chain, kernel)
    stats = terminal_noise_statistics(kernel, sequence, problem.initial, steps,
                                      config.paths, args.seed, args.workers)
    print(f"W^M(N̄): media={stats.mean:.6g} ± {stats.stderr:.3g}; "
          f"cota de ⟨W^M⟩ {'✅' if stats.qv_bound_holds else '❌'}")
    emit_reports(
        ReportBundle(consistency=consistency.to_frame(), qv=noise.qv_frame(qv_bound_constant(kernel))),
        args.out, names=['consistency', 'qv'],
    )
    return 0 if stats.qv_bound_holds and stats.within_three_stderr else CHECK_FAILED


def cmd_study(config: ProblemConfig, args) -> int:
    report = run_study(config)
    print(report.to_frame(include_wall_time=True).to_string(index=False))
    emit_reports(ReportBundle(study=report.to_frame()), args.out, names=['study'])
    return 0 if report.converging else CHECK_FAILED


def cmd_bench_brownian(config: ProblemConfig, args) -> int:
    report = run_brownian_benchmark(config)
    frame = report.to_frame()
    print(frame.to_string(index=False))
    emit_reports(ReportBundle(benchmark=frame), args.out, names=['benchmark'])
    return 0 if report.max_oracle_error <= 1e-10 else CHECK_FAILED


def cmd_demo_pathological(config: ProblemConfig, args) -> int:
    report = run_pathological_demo(config)
    print(report.to_frame().to_string(index=False))
    return 0 if report.passes else CHECK_FAILED


COMMANDS = {
    'check': cmd_check,
    'solve': cmd_solve,
    'simulate': cmd_simulate,
    'study': cmd_study,
    'bench-brownian': cmd_bench_brownian,
    'demo-pathological': cmd_demo_pathological,
}


# ============================================================
# SECCIÓN 3: ARGUMENTOS Y EJECUCIÓN
# ============================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Aproximación por cadenas de Markov para control estocástico con retardo",
    )
    parser.add_argument('--config', type=Path, default=DEFAULT_CONFIG_PATH, help="Ruta al JSON de configuración")
    parser.add_argument('--seed', type=int, default=None, help="Semilla (gana sobre DELAYMCA_SEED y el archivo)")
    parser.add_argument('--workers', type=int, default=None, help="Procesos para Monte Carlo")
    parser.add_argument('--out', type=Path, default=None, help="Carpeta de reportes (default: output_dir)")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument('-v', '--verbose', action='store_true', help="Logging DEBUG")
    verbosity.add_argument('-q', '--quiet', action='store_true', help="Solo advertencias y errores")

    sub = parser.add_subparsers(dest='command', required=True)
    sub.add_parser('check', help="Valida configuración, hipótesis y kernel")
    solve = sub.add_parser('solve', help="Resuelve V^M para un grado")
    solve.add_argument('--degree', type=int, default=None, help="Grado M (default: el primero de la config)")
    solve.add_argument('--evaluate', action='store_true', help="Evalúa la política óptima por Monte Carlo")
    simulate = sub.add_parser('simulate', help="Diagnósticos de la cadena simulada")
    simulate.add_argument('--degree', type=int, default=None, help="Grado M (default: el primero de la config)")
    simulate.add_argument('--control', default=None, help="Etiqueta del control constante (default: el primero)")
    sub.add_parser('study', help="Estudio de convergencia en M")
    sub.add_parser('bench-brownian', help="Benchmark Browniano")
    sub.add_parser('demo-pathological', help="Demostración de la difusión patológica")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format='%(asctime)s - %(name)s - %(levelname)s - %(message)s')

    try:
        config = load_config(args.config)
        args.seed = resolve_seed(args.seed, config.seed)
        args.workers = args.workers if args.workers is not None else config.workers
        args.out = args.out if args.out is not None else config.output_dir
        logger.info(f"🚀 {args.command}: semilla={args.seed}, workers={args.workers}")
        return COMMANDS[args.command](config, args)
    except DelayMcaError as e:
        logger.error(str(e))
        return e.exit_code


if __name__ == '__main__':
    sys.exit(main())
