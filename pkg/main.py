#!/usr/bin/env python3
"""
polycf: exact verification of polynomial continued fractions

Evaluates generalized continued fractions to a requested precision, tabulates
convergent errors against independent oracles, builds Gauss hypergeometric
fractions, applies equivalence transformations and analyzes convergence
through the Worpitzky parameter.
"""

import argparse
import sys
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from analysis import analyze, classify, symbolic_limit
from cf_parser import load_spec_source, parse_cf_spec, parse_scaling_spec
from cfengine import (
    ContinuedFraction, convergents, determinant_defect, error_sequence, evaluate,
    evaluate_backward,
)
from config import PUBLISHED_VALUES, Config
from equivtrans import (
    apply_equivalence, exact_tilde_numerator, linear_scaling, verify_invariance,
    verify_sign_inversion,
)
from errors import (
    NoConvergenceError, OracleInconsistencyError, PolyCFError, SpecSemanticError,
)
from exactnum import hp_from_rational, leibniz_partial_sum, pi_quarter
from gausshyp import GaussParameters, gauss_cf, gauss_coefficients, specialization_cf
from polyseq import asymptotic_expand
from presets import (
    PRESETS, SCALING_PRESETS, Preset, get_preset, load_preset, load_scaling_preset,
    resolve_reference,
)
from report_writer import ReportWriter
from utils import format_rational, format_scientific, progress, setup_logging

__version__ = "1.0.0"

CONJECTURE = "conjecture-pi4"


def _str(value) -> Optional[str]:
    return None if value is None else str(value)


def _expansion_dict(expansion) -> Optional[Dict]:
    if expansion is None:
        return None
    return {
        "top_degree": expansion.top_degree,
        "coefficients": [str(c) for c in expansion.coefficients],
        "remainder_order": expansion.remainder_order,
    }


class PolyCF:
    """Runs the polycf commands and returns their results as dicts of strings"""

    def __init__(self, digits: int = Config.DEFAULT_DIGITS, max_depth: Optional[int] = None):
        self.digits = digits
        self.max_depth = max_depth
        self.logger = setup_logging()

    def load_cf(self, spec: Optional[str] = None,
                preset: Optional[str] = None) -> Tuple[ContinuedFraction, Optional[Preset]]:
        """Fraction from --spec (file or inline text) or --preset"""
        if spec:
            source = load_spec_source(spec)
            self.logger.info(f"Parsing continued fraction from {source.origin}")
            return parse_cf_spec(source), None
        name = preset or CONJECTURE
        return load_preset(name), get_preset(name)

    def _depth(self, preset: Optional[Preset]) -> int:
        if self.max_depth:
            return self.max_depth
        return preset.max_depth if preset else Config.DEFAULT_MAX_DEPTH

    def run_eval(self, cf: ContinuedFraction, preset: Optional[Preset] = None) -> Dict:
        evaluation = evaluate(cf, self.digits, self._depth(preset))
        return {
            "command": "eval",
            "label": cf.label,
            "digits": self.digits,
            "value": str(evaluation.value.round_to(self.digits)),
            "depth": evaluation.depth,
        }

    def run_table(self, cf: ContinuedFraction, reference: str, rows: List[int],
                  bracket: bool = False) -> Dict:
        wanted = set(rows)
        if bracket:
            for n in rows:
                wanted.update(m for m in (n - 1, n + 1) if m >= 1)
        wanted = sorted(wanted)
        result = {"command": "table", "label": cf.label, "reference": reference,
                  "rows": [], "flags": []}
        if not wanted:
            return result

        N = wanted[-1]
        reference_value = resolve_reference(reference, Config.working_precision(self.digits, N) + N)
        published = PUBLISHED_VALUES["table"] if cf.same_terms(load_preset(CONJECTURE)) else None
        entries = {e.n: e for e in error_sequence(cf, reference_value, N)}

        mismatches = []
        for n in wanted:
            entry = entries[n]
            value = None if entry.value is None else str(hp_from_rational(entry.value, self.digits))
            row = {
                "n": n,
                "value": value,
                "abs_error": format_scientific(entry.abs_error),
                "digits": entry.digits,
            }
            if published is not None:
                row_published = published.get(n)
                row["published_error"] = row_published or ""
                row["flag"] = ""
                if row_published and row_published != row["abs_error"]:
                    row["flag"] = "differs"
                    mismatches.append(n)
            result["rows"].append(row)

        if mismatches:
            result["flags"].append(
                f"published errors differ at n = {', '.join(map(str, mismatches))}; "
                f"the published indexing convention is not stated"
            )
        return result

    def run_gauss(self, params: GaussParameters, depth: int, convention: str) -> Dict:
        cf = gauss_cf(params, depth, convention)
        shown = gauss_coefficients(params, min(depth, Config.GAUSS_PRINT_LIMIT))
        truncated = evaluate_backward(cf, depth, self.digits).round_to(self.digits)
        result = {
            "command": "gauss",
            "parameters": str(params),
            "convention": convention,
            "digits": self.digits,
            "depth": depth,
            "spec": cf.to_dsl(),
            "truncated_value": str(truncated),
            "stabilized": False,
            "value": None,
            "stabilization_depth": None,
            "d": [{"n": n, "d": str(shown[n])} for n in range(1, len(shown) + 1)],
            "flags": [],
        }
        try:
            evaluation = evaluate(cf, self.digits, depth)
            result.update(stabilized=True, value=str(evaluation.value.round_to(self.digits)),
                          stabilization_depth=evaluation.depth)
        except NoConvergenceError as e:
            self.logger.warning(f"Gauss fraction {params}: {e}")
            if convention == "direct":
                result["flags"].append(
                    "the direct convention a(n+1) = d(n) z did not stabilize; "
                    "--convention classical uses a(n+1) = -d(n) z"
                )
        return result

    def run_transform(self, cf: ContinuedFraction, scaling, N: int) -> Dict:
        transformed = apply_equivalence(cf, scaling)
        try:
            transformed_dsl = transformed.to_dsl()
        except SpecSemanticError:
            transformed_dsl = "(no closed form)"
        report = verify_invariance(cf, scaling, N)
        return {
            "command": "transform",
            "source": cf.to_dsl(),
            "scaling": scaling.to_dsl(),
            "transformed": transformed_dsl,
            "all_equal": report.all_equal,
            "head": [{"n": n, "a": str(transformed.a(n)), "b": str(transformed.b(n))}
                     for n in range(1, 6)],
            "invariance": [{"n": v.n, "values_equal": v.values_equal, "pairs_equal": v.pairs_equal}
                           for v in report.verdicts],
        }

    def run_analyze(self, cf: ContinuedFraction, N: int, reference: Optional[str]) -> Dict:
        reference_value = None
        if reference:
            reference_value = resolve_reference(
                reference, Config.working_precision(self.digits, N) + N
            )
        report = analyze(cf, N, reference_value)
        rate = report.digits_per_10
        empirical = {
            "n": [row.n for row in report.empirical],
            "error": [format_scientific(row.error) for row in report.empirical],
            "ratio": [_str(row.ratio) for row in report.empirical],
            "fitted_digits_per_10": _str(report.empirical_digits_per_10),
        }
        return {
            "command": "analyze",
            "label": report.label,
            "L": format_rational(report.limit),
            "classification": report.classification,
            "sigma": _str(report.sigma),
            "characteristic_ratio": _str(report.characteristic),
            "digits_per_10": None if rate is None else str(rate.round_to(Config.RATE_DIGITS)),
            "rho_closed_form": None if report.rho_closed_form is None else report.rho_closed_form.to_dsl(),
            "rho_samples": [{"n": n, "rho": format_rational(rho)} for n, rho in report.rho_samples],
            "rho_expansion": _expansion_dict(report.rho_expansion),
            "numerator_expansion": _expansion_dict(report.numerator_expansion),
            "empirical": empirical,
            "flags": list(report.notes),
        }

    def run_presets(self) -> Dict:
        rows = [{"name": p.name, "kind": "fraction", "description": p.description, "spec": p.text}
                for p in PRESETS.values()]
        rows += [{"name": p.name, "kind": "scaling", "description": p.description, "spec": p.text}
                 for p in SCALING_PRESETS.values()]
        return {"command": "presets", "presets": rows}

    def run_verify(self) -> Dict:
        """End-to-end pipeline: kernel, transform, conjecture, analysis, table"""
        checks = VerificationPipeline(self.digits).run()
        counts = {status: sum(c["status"] == status for c in checks)
                  for status in ("PASS", "FLAG", "FAIL")}
        return {
            "command": "verify",
            "passed": counts["PASS"],
            "flagged": counts["FLAG"],
            "failed": counts["FAIL"],
            "checks": checks,
        }


class VerificationPipeline:
    """Ordered PASS/FLAG/FAIL checks over the built-in fractions"""

    def __init__(self, digits: int = Config.DEFAULT_DIGITS):
        self.digits = digits
        self.logger = setup_logging()
        self.conjecture = load_preset(CONJECTURE)
        self.kernel = specialization_cf("direct")
        self.classical = specialization_cf("classical")
        self.transformed = apply_equivalence(self.kernel, linear_scaling())

    def checks(self) -> List[Tuple[str, Callable[[], Tuple[str, str]]]]:
        return [
            ("pi/4 oracle and Leibniz bracketing", self.check_oracle),
            ("Gauss coefficients d_n = n^2/(4n^2-1)", self.check_gauss_coefficients),
            ("transformed numerators", self.check_tilde_numerators),
            ("equivalence invariance", self.check_invariance),
            ("sign inversion of the head", self.check_sign_inversion),
            ("determinant identity", self.check_determinant),
            ("Worpitzky parameters", self.check_worpitzky),
            ("convergence factor", self.check_sigma),
            ("asymptotic expansions", self.check_expansions),
            ("conjecture value", self.check_conjecture_value),
            ("published error table", self.check_published_table),
            ("boundary kernels", self.check_boundary_kernels),
            ("preset round trip", self.check_round_trip),
        ]

    def run(self) -> List[Dict]:
        results = []
        for name, check in progress(self.checks(), desc="verify"):
            try:
                status, detail = check()
            except PolyCFError as e:
                self.logger.error(f"Check '{name}' raised: {e}")
                status, detail = "FAIL", str(e)
            results.append({"name": name, "status": status, "detail": detail})
        return results

    @staticmethod
    def _verdict(ok: bool, detail: str = "") -> Tuple[str, str]:
        return ("PASS" if ok else "FAIL"), detail

    def check_oracle(self):
        quarter = pi_quarter(50).to_fraction()
        bracketed = all(
            leibniz_partial_sum(2 * k + 1) < quarter < leibniz_partial_sum(2 * k)
            for k in range(51)
        )
        return self._verdict(bracketed, f"pi/4 = {pi_quarter(50)}")

    def check_gauss_coefficients(self):
        p = GaussParameters(Fraction(1, 2), 0, Fraction(1, 2), -1)
        d = gauss_coefficients(p, 100)
        ok = all(d[n] == Fraction(n * n, 4 * n * n - 1) for n in range(1, 101))
        return self._verdict(ok, "n = 1..100")

    def check_tilde_numerators(self):
        a = self.transformed.a
        ok = a(2) == Fraction(-4, 3) and a(3) == Fraction(-112, 15) \
            and all(a(n) == exact_tilde_numerator(n) for n in range(2, 201))
        return self._verdict(ok, f"a~_2 = {a(2)}, a~_3 = {a(3)}, closed form n = 2..200")

    def check_invariance(self):
        report = verify_invariance(self.kernel, linear_scaling(), 50)
        return self._verdict(report.all_equal, "n = 1..50")

    def check_sign_inversion(self):
        return self._verdict(verify_sign_inversion(self.transformed, 50), "n = 1..50")

    def check_determinant(self):
        defect = determinant_defect(self.conjecture, 50)
        return self._verdict(defect is None, "" if defect is None else f"fails at n = {defect}")

    def check_worpitzky(self):
        found = symbolic_limit(self.conjecture)
        a, b = self.conjecture.a, self.conjecture.b
        quarter = Fraction(1, 4)
        rho = [a(n) / (b(n) * b(n - 1)) for n in range(2, Config.VERIFY_RANGE + 1)]
        ok = (found is not None and found.limit == PUBLISHED_VALUES["limit"]
              and rho[0] == quarter and all(abs(r) < quarter for r in rho[1:]))
        return self._verdict(ok, f"L = {found.limit if found else None}, "
                                 f"{classify(found.limit if found else None)}")

    def check_sigma(self):
        report = analyze(self.conjecture, 10)
        rate = report.digits_per_10
        expected_rate = PUBLISHED_VALUES["digits_per_10"]
        ok = report.sigma == PUBLISHED_VALUES["sigma"] and rate is not None \
            and str(rate.round_to(len(expected_rate.split(".")[1]))) == expected_rate
        return self._verdict(ok, f"sigma = {report.sigma}, digits per 10 = {rate}")

    def check_expansions(self):
        tilde = asymptotic_expand(self.transformed.a.tail.rule, -1)
        found = symbolic_limit(self.conjecture)
        rho = asymptotic_expand(found.rho_closed_form, -2)
        published = PUBLISHED_VALUES["rho_expansion"]
        if tilde.coefficients[:3] != PUBLISHED_VALUES["tilde_expansion"] \
                or rho.coefficients[:2] != published[:2]:
            return "FAIL", f"a~_n: {tilde}; rho_n: {rho}"
        if rho.coefficient(-2) != published[2]:
            return "FLAG", f"rho_n n^-2 coefficient {rho.coefficient(-2)}, published {published[2]}"
        return "PASS", str(rho)

    def check_conjecture_value(self):
        value = evaluate(self.conjecture, self.digits).value.round_to(self.digits)
        target = -pi_quarter(self.digits + Config.GUARD_DIGITS).to_fraction()
        close = abs(value.to_fraction() - target) <= Fraction(1, 10 ** self.digits)
        f25 = convergents(self.conjecture, 25)[-1].value
        ok = close and abs(f25 - target) < Fraction(1, 10 ** 9)
        return self._verdict(ok, f"{value}")

    def check_published_table(self):
        reference = -pi_quarter(40)
        entries = error_sequence(self.conjecture, reference, 45)
        errors = [e.abs_error for e in entries]
        decreasing = all(errors[n] < errors[n - 1] for n in range(3, 40))
        fivefold = all(errors[n + 4] < errors[n - 1] / 4 for n in range(5, 41))
        if not (decreasing and fivefold):
            return "FAIL", "errors do not decrease as expected"
        computed = {n: format_scientific(errors[n - 1]) for n in PUBLISHED_VALUES["table"]}
        published = PUBLISHED_VALUES["table"]
        if computed != published:
            detail = ", ".join(f"n={n}: {computed[n]} vs {published[n]}" for n in computed)
            return "FLAG", detail
        return "PASS", ""

    def check_boundary_kernels(self):
        kinds = {classify(symbolic_limit(cf).limit) for cf in (self.kernel, self.classical)}
        value = evaluate(self.classical, 6, Config.GAUSS_MAX_DEPTH).value.round_to(6)
        agrees = value == pi_quarter(6)
        if kinds != {"boundary"} or not agrees:
            return "FAIL", f"classes {sorted(kinds)}, classical value {value}"
        try:
            evaluate(self.kernel, 6, 2000)
        except NoConvergenceError:
            return "FLAG", (f"classical kernel = {value}; the kernel with a_(n+1) = d_n z "
                            f"does not stabilize")
        return "PASS", f"classical kernel = {value}"

    def check_round_trip(self):
        for name in PRESETS:
            cf = load_preset(name)
            again = parse_cf_spec(cf.to_dsl(), label=name)
            if (again.b0, again.a, again.b) != (cf.b0, cf.a, cf.b):
                return "FAIL", f"{name} does not round-trip"
        kernel = load_preset("gauss-kernel")
        ok = (kernel.a, kernel.b) == (self.kernel.a, self.kernel.b)
        return self._verdict(ok, f"{len(PRESETS)} presets")


class _ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with status 1"""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def create_argument_parser() -> argparse.ArgumentParser:
    """Create command line argument parser"""

    common = _ArgumentParser(add_help=False)
    common.add_argument('--format', '-f', choices=Config.OUTPUT_FORMATS, default='text',
                        help='Output format (default: text)')
    common.add_argument('--output', '-o', help='Also write the report to this file')
    common.add_argument('--digits', '-d', type=int, default=Config.DEFAULT_DIGITS,
                        help=f'Decimal digits (default: {Config.DEFAULT_DIGITS})')
    common.add_argument('--verbose', '-v', action='store_true', help='Enable verbose logging')
    common.add_argument('--progress', action='store_true', help='Show progress bars on stderr')

    source = _ArgumentParser(add_help=False)
    source.add_argument('--spec', '-s', help='Continued fraction spec: a file path or inline text')
    source.add_argument('--preset', '-p', choices=list(PRESETS),
                        help='Built-in continued fraction (default: conjecture-pi4)')
    source.add_argument('--max-depth', type=int,
                        help=f'Evaluation depth limit (default: {Config.DEFAULT_MAX_DEPTH}, '
                             f'{Config.GAUSS_MAX_DEPTH} for Gauss presets)')

    parser = _ArgumentParser(
        prog='polycf',
        description="polycf: exact verification of polynomial continued fractions",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s eval --preset conjecture-pi4 --digits 10
  %(prog)s table --preset conjecture-pi4 --rows 5 10 15 --format csv
  %(prog)s gauss 1/2 0 1/2 -1 --convention classical
  %(prog)s transform --preset gauss-kernel --scaling-preset linear-scaling
  %(prog)s analyze --spec "b0 = 1; a(n) = 1; b(n) = 2" --format json
  %(prog)s verify --format markdown --output verification.md
        """
    )
    parser.add_argument('--version', action='version', version=f'polycf {__version__}')
    commands = parser.add_subparsers(dest='command', required=True, parser_class=_ArgumentParser)

    commands.add_parser('eval', parents=[common, source], help='Evaluate to the requested digits')

    table = commands.add_parser('table', parents=[common, source],
                                help='Convergent errors against a reference constant')
    table.add_argument('--reference', '-r',
                       help='pi_over_4, minus_pi_over_4, sqrt2 or a decimal literal '
                            '(default: the preset reference)')
    table.add_argument('--rows', type=int, nargs='*', default=list(Config.DEFAULT_TABLE_ROWS),
                       help='Convergent indices (default: 5 10 15)')
    table.add_argument('--bracket', action='store_true', help='Add rows n-1 and n+1')

    gauss = commands.add_parser('gauss', parents=[common],
                                help='Gauss continued fraction of 2F1(a,b+1;c+1;z)/2F1(a,b;c;z)')
    for name in ('a', 'b', 'c', 'z'):
        gauss.add_argument(name, help=f'Rational parameter {name}, e.g. 1/2')
    gauss.add_argument('--depth', type=int, default=1000, help='Truncation depth (default: 1000)')
    gauss.add_argument('--convention', choices=('direct', 'classical'), default='direct',
                       help='Sign of the partial numerators (default: direct)')

    transform = commands.add_parser('transform', parents=[common, source],
                                    help='Apply an equivalence transformation')
    transform.add_argument('--scaling', help='Scaling spec r(n): a file path or inline text')
    transform.add_argument('--scaling-preset', choices=list(SCALING_PRESETS),
                           default='linear-scaling', help='Built-in scaling (default: linear-scaling)')
    transform.add_argument('-N', '--depth', type=int, default=30,
                           help='Convergents compared for invariance (default: 30)')

    analysis = commands.add_parser('analyze', parents=[common, source],
                                   help='Worpitzky analysis and convergence rates')
    analysis.add_argument('-N', '--depth', type=int, default=Config.DEFAULT_ANALYSIS_DEPTH,
                          help=f'Sample range (default: {Config.DEFAULT_ANALYSIS_DEPTH})')
    analysis.add_argument('--reference', '-r',
                          help='Reference constant for empirical errors (default: the preset reference)')

    commands.add_parser('presets', parents=[common], help='List built-in fractions and scalings')
    commands.add_parser('verify', parents=[common], help='Run the full verification pipeline')

    return parser


def run_command(app: PolyCF, args) -> Dict:
    if args.command == 'presets':
        return app.run_presets()
    if args.command == 'verify':
        return app.run_verify()
    if args.command == 'gauss':
        params = GaussParameters(*(Fraction(getattr(args, name)) for name in ('a', 'b', 'c', 'z')))
        return app.run_gauss(params, args.depth, args.convention)

    cf, preset = app.load_cf(args.spec, args.preset)
    default_reference = preset.reference if preset else None
    if args.command == 'eval':
        return app.run_eval(cf, preset)
    if args.command == 'table':
        reference = args.reference or default_reference
        if reference is None:
            raise SpecSemanticError("table needs --reference for this fraction")
        return app.run_table(cf, reference, args.rows, args.bracket)
    if args.command == 'transform':
        if args.scaling:
            scaling = parse_scaling_spec(load_spec_source(args.scaling))
        else:
            scaling = load_scaling_preset(args.scaling_preset)
        return app.run_transform(cf, scaling, args.depth)
    return app.run_analyze(cf, args.depth, args.reference or default_reference)


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""

    parser = create_argument_parser()
    args = parser.parse_args(argv)

    logger = setup_logging("DEBUG" if args.verbose else Config.LOG_LEVEL)
    Config.SHOW_PROGRESS = args.progress

    try:
        writer = ReportWriter(args.format)
        app = PolyCF(args.digits, getattr(args, 'max_depth', None))
        result = run_command(app, args)
        content = writer.render(result)
        sys.stdout.write(content)
        if args.output:
            writer.save(content, args.output)
    except NoConvergenceError as e:
        logger.error(f"No convergence: {e}")
        return 2
    except OracleInconsistencyError as e:
        logger.error(f"Oracle inconsistency: {e}")
        return 3
    except (PolyCFError, ValueError, ZeroDivisionError, OSError) as e:
        logger.error(f"Error: {e}")
        return 1

    if result["command"] == "verify" and result["failed"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
