import argparse
import json
import logging
import sys
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from .code_engine import (
    LinearCodeSpec, WeightDistribution, assmus_mattson_check, build_code, classify_mds,
    coefficients_low_first, cyclotomic_cosets, dual_min_weight_codewords,
    dual_weight_distribution, enumerate_low_weight, macwilliams_transform,
    minimum_distance, nmds_pairing_check, write_codewords,
)
from .config import Config, OUTPUT_FORMATS
from .database import ResultStore
from .design_engine import IncidenceStructure, design_parameters_check, verify_design
from .errors import BCHDesignError, BudgetExceededError
from .finite_field import M_MAX, M_MIN, FieldSpec, build_field, field_record, parse_field_record
from .report import CheckResult, ReportDocument
from .support_link import build_support_map
from .symmetric_blocks import (
    BlockFamily, FamilyTag, enumerate_b63, enumerate_blocks_bruteforce, enumerate_steiner_blocks,
    read_family, split_b63, steiner_generation_counts, write_family,
)
from .utils import payload_fingerprint, utc_now

logger = logging.getLogger(__name__)

SUBCOMMANDS = ('field-info', 'blocks', 'verify', 'weights', 'am-check', 'nmds', 'classify')
VERIFY_TARGETS = ('b63', 'b63-b0', 'b63-b1', 'steiner', 'code-w5', 'code-w6', 'dual-min')
WEIGHT_SOURCES = ('dual-trace', 'primal-macwilliams', 'low-weight-scan')
BLOCK_MODES = ('brute', 'constructive', 'both')
EXTENDED_FROM_M = 6

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_BUDGET = 2


@dataclass
class RunConfig:
    m: int
    subcommand: str
    threads: int = 1
    budget: int = 10**9
    out: Optional[str] = None
    fmt: str = 'json'
    seed: int = 2020
    extended: bool = False
    use_cache: bool = True
    family_file: Optional[str] = None
    pinned_field: Optional[str] = None
    codeword_file: Optional[str] = None
    options: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> 'RunConfig':
        options = {}
        for key in ('k', 'ell', 'mode', 'target', 't', 'which', 'sample'):
            if getattr(args, key, None) is not None:
                options[key] = getattr(args, key)
        return cls(
            m=args.m,
            subcommand=args.subcommand,
            threads=args.threads if args.threads is not None else Config.THREADS,
            budget=args.budget if args.budget is not None else Config.BUDGET,
            out=args.out,
            fmt=args.format or Config.OUTPUT_FORMAT,
            seed=args.seed if args.seed is not None else Config.SEED,
            extended=args.extended or Config.EXTENDED,
            use_cache=not args.no_cache and bool(Config.DATABASE_URL),
            family_file=args.family_file,
            pinned_field=args.field_record,
            codeword_file=getattr(args, 'codeword_file', None),
            options=options,
        )

    def validate(self):
        if not M_MIN <= self.m <= M_MAX:
            raise ValueError(f"m must lie in [{M_MIN}, {M_MAX}], got {self.m}")
        if self.subcommand not in SUBCOMMANDS:
            raise ValueError(f"unknown subcommand {self.subcommand!r}")
        if self.budget <= 0:
            raise ValueError("budget must be positive")
        if self.threads < 1:
            raise ValueError("threads must be at least 1")
        if self.fmt not in OUTPUT_FORMATS:
            raise ValueError(f"format must be one of {', '.join(OUTPUT_FORMATS)}")
        if self.m >= EXTENDED_FROM_M and self.subcommand != 'field-info' and not self.extended:
            raise ValueError(f"m={self.m} workloads need --extended (or BCH_EXTENDED=1)")

    def payload(self) -> Dict[str, Any]:
        """The parts of the configuration that decide the results."""
        return {
            'm': self.m,
            'subcommand': self.subcommand,
            'budget': self.budget,
            'seed': self.seed,
            'options': dict(sorted(self.options.items())),
        }


def natural_t(spec: FieldSpec) -> int:
    """Strength of the designs held by B(6,3): 3 for even m, 4 for odd m."""
    return 3 if spec.m % 2 == 0 else 4


class BCHDesignApp:
    def __init__(self, run: RunConfig):
        self.run = run
        self.spec: Optional[FieldSpec] = None
        self.store: Optional[ResultStore] = None
        self._code: Optional[LinearCodeSpec] = None
        self._b63: Optional[BlockFamily] = None
        self._timings: Dict[str, float] = {}

    def initialize(self):
        """Validate the run and build the field (and the result cache if enabled)."""
        self.run.validate()
        self.spec = build_field(self.run.m)
        if self.run.pinned_field:
            self._check_pinned_field(self.run.pinned_field)
        if self.run.use_cache:
            try:
                self.store = ResultStore(Config.DATABASE_URL)
                self.store.create_tables()
            except Exception as e:
                logger.warning(f"Result cache unavailable, continuing without it: {e}")
                self.store = None
        logger.info(f"Initialized {self.run.subcommand} at q={self.spec.q}")

    def _check_pinned_field(self, path: str):
        """A field record (or an earlier JSON report holding one) must describe this build."""
        with open(path) as stream:
            data = json.load(stream)
        record = data.get('field', data)
        if parse_field_record(record) is not self.spec:
            raise ValueError(f"{path} pins m={record['m']}, this run has m={self.run.m}")
        logger.info(f"Field pinned by {path}: {record['reduction_poly']}")

    def shutdown(self):
        if self.store is not None and self.store.engine is not None:
            self.store.engine.dispose()

    @contextmanager
    def timed(self, step: str):
        start = time.perf_counter()
        try:
            yield
        finally:
            self._timings[step] = round(time.perf_counter() - start, 3)

    # shared artefacts

    @property
    def code(self) -> LinearCodeSpec:
        if self._code is None:
            with self.timed('build_code'):
                self._code = build_code(self.run.m)
        return self._code

    def b63(self) -> BlockFamily:
        if self._b63 is None:
            if self.run.family_file:
                with open(self.run.family_file, newline='') as stream:
                    family = read_family(stream)
                if (family.q, family.k, family.ell) != (self.spec.q, 6, 3):
                    raise ValueError(f"{self.run.family_file} does not hold B(6,3) at q={self.spec.q}")
                self._b63 = family
            else:
                with self.timed('enumerate_b63'):
                    self._b63 = enumerate_b63(self.spec, self.run.budget, self.run.threads)
        return self._b63

    def _cached_distribution(self, which: str, method: str, dimension: int) -> Optional[WeightDistribution]:
        if self.store is None:
            return None
        counts = self.store.get_distribution(self.run.m, which, method, field_record(self.spec))
        if counts is None:
            return None
        return WeightDistribution(counts, self.spec.q, dimension)

    def _remember(self, which: str, method: str, dist: WeightDistribution):
        if self.store is not None:
            self.store.store_distribution(self.run.m, which, method, dist.to_list(),
                                          field_record(self.spec))

    def dual_distribution(self) -> WeightDistribution:
        dist = self._cached_distribution('dual', 'trace_enum', 6)
        if dist is None:
            with self.timed('dual_trace_enum'):
                dist = dual_weight_distribution(self.code, 'trace_enum', self.run.budget,
                                                self.run.threads)
            self._remember('dual', 'trace_enum', dist)
        return dist

    def primal_distribution(self) -> WeightDistribution:
        code = self.code
        dist = self._cached_distribution('primal', 'macwilliams', code.dimension)
        if dist is None:
            dual = self.dual_distribution()
            with self.timed('macwilliams'):
                dist = macwilliams_transform(dual, code.n, code.n - code.dimension, code.q)
            self._remember('primal', 'macwilliams', dist)
        return dist

    # subcommands

    def execute(self) -> ReportDocument:
        report = ReportDocument(self.run.subcommand, field_record(self.spec), self.run.payload())
        handler = getattr(self, 'cmd_' + self.run.subcommand.replace('-', '_'))
        handler(report)
        report.timings = {'generated_at': utc_now().isoformat(), 'seconds': dict(self._timings)}
        return report

    def cmd_field_info(self, report: ReportDocument):
        spec = self.spec
        code = self.code
        cosets = cyclotomic_cosets(spec.q + 1, spec.q)
        report.results.update({
            'beta': f"{spec.beta:#x}",
            'unit_circle': spec.q + 1,
            'coset_leaders': [c.leader for c in cosets],
            'generator_poly': [f"{c:#x}" for c in coefficients_low_first(code.generator_poly)],
        })
        report.add(CheckResult.against('code.dimension', spec.q, code.dimension))

    def cmd_blocks(self, report: ReportDocument):
        spec = self.spec
        k = self.run.options.get('k', 6)
        ell = self.run.options.get('ell', 3)
        mode = self.run.options.get('mode', 'both')
        families: Dict[str, BlockFamily] = {}
        if mode in ('brute', 'both'):
            with self.timed('bruteforce'):
                families['brute'] = enumerate_blocks_bruteforce(spec, k, ell, self.run.budget,
                                                                self.run.threads)
        if mode in ('constructive', 'both'):
            with self.timed('constructive'):
                families['constructive'] = self._constructive(k, ell)

        family = families.get('constructive', families.get('brute'))
        report.results.update({'k': k, 'ell': ell, 'mode': mode, 'count': family.count})
        claim = {(5, 2): 'steiner.count', (6, 3): 'b63.count'}.get((k, ell))
        if claim is not None:
            report.add(CheckResult.against(claim, spec.q, family.count))
        else:
            report.add(CheckResult(f"B({k},{ell}).count", family.count))
        if mode == 'both':
            agree = families['brute'].as_set() == families['constructive'].as_set()
            report.add(CheckResult('blocks.modes_agree', agree, True))
        if self.run.family_file:
            with open(self.run.family_file, 'w', newline='') as stream:
                write_family(family, stream)
            logger.info(f"Wrote {family.count} blocks to {self.run.family_file}")

    def _constructive(self, k: int, ell: int) -> BlockFamily:
        if (k, ell) == (5, 2):
            if self.spec.m % 2:
                return BlockFamily(self.spec.q, 5, 2, FamilyTag.FULL, [])
            return enumerate_steiner_blocks(self.spec)
        if (k, ell) == (6, 3):
            return enumerate_b63(self.spec, self.run.budget, self.run.threads)
        raise ValueError(f"no constructive enumerator for B({k},{ell}); use --mode brute")

    def _verify(self, report: ReportDocument, structure: IncidenceStructure, t: int,
                claim: str, natural: bool, stated: Optional[str] = None,
                example: Optional[str] = None):
        with self.timed(f'verify_t{t}'):
            design = verify_design(structure, t, self.run.budget, self.run.threads)
        report.results['design'] = design.to_dict()
        report.add(CheckResult('design.constant_coverage', design.is_design, True))
        if design.is_design:
            params = design_parameters_check(design)
            report.results['lambda_s'] = {str(s): str(v) for s, v in params.items()}
            report.add(CheckResult('design.lambda_s_integral',
                                   all(v.denominator == 1 for v in params.values()), True))
        if natural:
            q = self.spec.q
            report.add(CheckResult.against(claim, q, design.lambda_))
            if stated is not None:
                report.add(CheckResult.against(stated, q, design.lambda_, informational=True))
            if example is not None:
                report.add(CheckResult.against(example, q, design.lambda_))
        return design

    def cmd_verify(self, report: ReportDocument):
        spec = self.spec
        q = spec.q
        target = self.run.options.get('target', 'b63')
        default_t = 3 if target == 'steiner' else natural_t(spec)
        t = self.run.options.get('t', default_t)
        natural = t == default_t
        report.results.update({'target': target, 't': t})

        if target == 'steiner':
            self._require_even(target)
            family = enumerate_steiner_blocks(spec)
            report.add(CheckResult.against('steiner.count', q, family.count))
            generations = set(steiner_generation_counts(spec).values())
            report.add(CheckResult.against('steiner.generations', q,
                                           generations.pop() if len(generations) == 1 else sorted(generations)))
            design = self._verify(report, IncidenceStructure.from_family(family), t,
                                  'steiner.lambda', natural)
            report.add(CheckResult('design.steiner', design.is_steiner, True if natural else None))
            return

        if target in ('b63', 'b63-b0', 'b63-b1'):
            if target != 'b63':
                self._require_even(target)
            family = self.b63()
            if target == 'b63':
                report.add(CheckResult.against('b63.count', q, family.count))
                self._verify(report, IncidenceStructure.from_family(family), t, 'b63.lambda',
                             natural, 'b63.lambda.stated', 'b63.example')
                return
            b0, b1 = split_b63(spec, family)
            part, prefix = (b0, 'b0') if target == 'b63-b0' else (b1, 'b1')
            report.add(CheckResult.against(f'{prefix}.count', q, part.count))
            structure = IncidenceStructure(q + 1, list(part.blocks), 6)
            self._verify(report, structure, t, f'{prefix}.lambda', natural)
            return

        w = {'code-w5': 5, 'code-w6': 6, 'dual-min': q - 5}[target]
        with self.timed('support_map'):
            support_map = build_support_map(self.code, w, self.run.budget, self.run.threads,
                                            None if w == 5 else self.b63())
        report.results['supports'] = support_map.structure.b
        report.results['match'] = support_map.match.to_dict()
        report.results['codewords_per_support'] = support_map.codewords_per_support
        report.add(CheckResult('support.matches_family', support_map.match.equal, True))
        if target == 'dual-min':
            report.add(CheckResult.against('dual.min_count', q, support_map.codewords))
            self._verify(report, support_map.structure, t, 'dual.lambda', natural,
                         'dual.lambda.stated', 'dual.example')
            return
        report.add(CheckResult.against(f'code.A{w}', q, support_map.codewords))
        if support_map.structure.blocks:
            report.add(CheckResult('support.codewords_per_support',
                                   support_map.codewords_per_support, q - 1))
        if w == 5:
            if spec.m % 2 == 0:
                self._verify(report, support_map.structure, 3, 'steiner.lambda', t == 3)
        else:
            claim = 'b1.lambda' if spec.m % 2 == 0 else 'b63.lambda'
            self._verify(report, support_map.structure, t, claim, natural)

    def _require_even(self, target: str):
        if self.spec.m % 2:
            raise ValueError(f"target {target} needs even m, got m={self.spec.m}")

    def cmd_weights(self, report: ReportDocument):
        q = self.spec.q
        which = self.run.options.get('which', 'dual-trace')
        report.results['which'] = which
        if which == 'dual-trace':
            dist = self.dual_distribution()
            report.results['distribution'] = dist.to_list()
            report.add(CheckResult.against('dual.distribution', q, dist.to_list()))
            report.add(CheckResult.against('dual.d', q, dist.min_weight))
            report.add(CheckResult.against('dual.min_count', q, dist.counts[q - 5]))
        elif which == 'primal-macwilliams':
            dist = self.primal_distribution()
            report.results['distribution'] = dist.to_list()
            report.add(CheckResult.against('primal.distribution', q, dist.to_list()))
            report.add(CheckResult.against('code.d', q, dist.min_weight))
            back = macwilliams_transform(dist, dist.n, dist.dimension, q)
            report.add(CheckResult('macwilliams.involution', back.to_list(),
                                   self.dual_distribution().to_list()))
        else:
            oracle = enumerate_low_weight(self.code, 3, self.run.budget, self.run.threads, oracle=True)
            report.add(CheckResult.against('code.A3', q, oracle.count))
            scans: Dict[str, int] = {}
            lightest = None
            for w in (4, 5, 6):
                with self.timed(f'low_weight_{w}'):
                    result = enumerate_low_weight(self.code, w, self.run.budget, self.run.threads,
                                                  candidates=self.b63().blocks if w == 6 else None,
                                                  exact=w == 6)
                scans[str(w)] = result.count
                report.add(CheckResult.against(f'code.A{w}', q, result.count))
                if lightest is None and result.supports:
                    lightest = result
            if self.run.codeword_file and lightest is not None:
                with open(self.run.codeword_file, 'w', newline='') as stream:
                    write_codewords(self.code, lightest, stream)
                logger.info(f"Wrote {len(lightest.supports)} weight-{lightest.w} codewords "
                            f"to {self.run.codeword_file}")
            partial = dual_weight_distribution(self.code, 'support_formula', self.run.budget,
                                               self.run.threads, family=self.b63())
            report.results['low_weights'] = scans
            report.results['dual_partial'] = {str(i): c for i, c in partial.nonzero().items()}
            report.add(CheckResult.against('dual.min_count', q, partial.counts[q - 5]))

    def cmd_am_check(self, report: ReportDocument):
        q = self.spec.q
        t = self.run.options.get('t', natural_t(self.spec))
        am = assmus_mattson_check(self.primal_distribution(), self.dual_distribution(), t, q)
        report.results['assmus_mattson'] = am.to_dict()
        if t == natural_t(self.spec):
            report.add(CheckResult.against('am.hypothesis', q, am.hypothesis_holds))
        else:
            report.add(CheckResult('am.hypothesis', am.hypothesis_holds))

    def cmd_nmds(self, report: ReportDocument):
        q = self.spec.q
        sample = self.run.options.get('sample', 100)
        dual = self._cached_distribution('dual', 'trace_enum', 6)
        with self.timed('nmds_pairing'):
            result = nmds_pairing_check(self.code, sample, self.run.seed, self.run.budget,
                                        self.run.threads, family=self.b63(), dual=dual)
        report.results['nmds'] = result.to_dict()
        report.add(CheckResult.against('code.class', q, result.code_class.value))
        report.add(CheckResult.against('code.A6', q, result.primal_count))
        report.add(CheckResult.against('dual.min_count', q, result.dual_count))
        report.add(CheckResult('nmds.counts_equal', result.counts_equal, True))
        report.add(CheckResult('nmds.pairing_unique', result.pairing_unique, True))
        report.add(CheckResult('nmds.complements', result.complements_match, True))

    def cmd_classify(self, report: ReportDocument):
        q = self.spec.q
        code = self.code
        with self.timed('minimum_distance'):
            d = minimum_distance(code, self.run.budget, self.run.threads).w
        dual = self._cached_distribution('dual', 'trace_enum', 6)
        if dual is not None:
            d_dual, source = dual.min_weight, 'distribution'
        else:
            supports = dual_min_weight_codewords(code, self.b63(), self.run.budget, self.run.threads)
            d_dual, source = (code.n - 6 if supports else None), 'trace bound'
        verdict = classify_mds(code.n, code.dimension, d, d_dual)
        report.results.update({'n': code.n, 'k': code.dimension, 'd': d, 'd_dual': d_dual,
                               'd_dual_source': source, 'class': verdict.value})
        report.add(CheckResult.against('code.d', q, d))
        report.add(CheckResult.against('dual.d', q, d_dual))
        report.add(CheckResult.against('code.class', q, verdict.value))

    # output

    def emit(self, report: ReportDocument):
        text = report.render(self.run.fmt)
        if self.run.out:
            with open(self.run.out, 'w') as stream:
                stream.write(text)
            logger.info(f"Report written to {self.run.out}")
        else:
            sys.stdout.write(text)
        if self.store is not None:
            fingerprint = payload_fingerprint(self.run.payload())
            payload = json.loads(json.dumps(report.payload(), sort_keys=True, default=str))
            earlier = self.store.get_run_reports(fingerprint)
            if earlier and earlier[-1] != payload:
                logger.warning(f"Results differ from the earlier {self.run.subcommand} run "
                               f"stored under {fingerprint[:12]}")
            self.store.add_run_report(self.run.subcommand, self.run.m, fingerprint,
                                      report.passed, report.payload())

    def run_app(self) -> int:
        """Initialize, execute, emit; the return value is the exit code."""
        try:
            self.initialize()
            report = self.execute()
            self.emit(report)
            if report.passed:
                logger.info(f"{self.run.subcommand}: all {len(report.checks)} checks passed")
                return EXIT_OK
            logger.error(f"{self.run.subcommand}: some checks failed")
            return EXIT_FAILED
        except BudgetExceededError as e:
            logger.error(f"Stopped: {e}. Raise --budget (or BCH_BUDGET) to run it.")
            return EXIT_BUDGET
        except (BCHDesignError, ValueError, OSError) as e:
            logger.error(f"{self.run.subcommand} failed: {e}")
            return EXIT_FAILED
        except Exception as e:
            logger.error(f"Unexpected error in {self.run.subcommand}: {e}", exc_info=True)
            return EXIT_FAILED
        finally:
            self.shutdown()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--m', type=int, required=True, help='q = 2^m')
    common.add_argument('--threads', type=int, help='worker count (default BCH_THREADS)')
    common.add_argument('--budget', type=int, help='largest enumeration allowed (default BCH_BUDGET)')
    common.add_argument('--out', help='write the report here instead of stdout')
    common.add_argument('--format', choices=OUTPUT_FORMATS, help='report format (default BCH_FORMAT)')
    common.add_argument('--seed', type=int, help='seed for sampled checks (default BCH_SEED)')
    common.add_argument('--extended', action='store_true', help='allow m >= 6 workloads')
    common.add_argument('--no-cache', action='store_true', help='do not read or write the result cache')
    common.add_argument('--family-file', help='B(6,3) family file to read (blocks: to write)')
    common.add_argument('--field-record', help='JSON field record or earlier report that must match this field')

    parser = argparse.ArgumentParser(prog='bch-designs',
                                     description='BCH codes C(q, q+1, 4, 1) and the designs they hold')
    sub = parser.add_subparsers(dest='subcommand', required=True)
    sub.add_parser('field-info', parents=[common], help='field, cosets and generator polynomial')

    blocks = sub.add_parser('blocks', parents=[common], help='enumerate B(k, ell)')
    blocks.add_argument('--k', type=int, default=6)
    blocks.add_argument('--ell', type=int, default=3)
    blocks.add_argument('--mode', choices=BLOCK_MODES, default='both')

    verify = sub.add_parser('verify', parents=[common], help='verify a design claim')
    verify.add_argument('--target', choices=VERIFY_TARGETS, default='b63')
    verify.add_argument('--t', type=int)

    weights = sub.add_parser('weights', parents=[common], help='weight distributions')
    weights.add_argument('--which', choices=WEIGHT_SOURCES, default='dual-trace')
    weights.add_argument('--codeword-file', help='low-weight-scan: write the lightest codewords here as CSV')

    am = sub.add_parser('am-check', parents=[common], help='Assmus-Mattson hypothesis')
    am.add_argument('--t', type=int)

    nmds = sub.add_parser('nmds', parents=[common], help='NMDS minimum-weight pairing')
    nmds.add_argument('--sample', type=int, default=100)

    sub.add_parser('classify', parents=[common], help='MDS / AMDS / NMDS verdict')
    return parser


def main(argv: Optional[List[str]] = None):
    """Entry point for the command line."""
    args = build_parser().parse_args(argv)
    try:
        Config.validate()
        Config.setup_logging()
        run = RunConfig.from_args(args)
    except ValueError as e:
        logger.error(f"Invalid configuration: {e}")
        sys.exit(EXIT_FAILED)
    sys.exit(BCHDesignApp(run).run_app())


if __name__ == "__main__":
    main()
