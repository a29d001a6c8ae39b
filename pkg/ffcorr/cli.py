"""
Command line driver.

    ffcorr verify --suite identities --q 3 --n 4
    ffcorr cov --alpha Lambda --beta Lambda --n 5 --delta 1 --q 5,7,9,11
    ffcorr fourier --alpha d3 --n 6

Every command writes a JSON report (stdout unless --output is given) and,
with --csv, a CSV table. Exit status: 0 success, 1 a verification row
failed, 2 invalid configuration or usage, 3 a resource cap was exceeded.
"""

from .algebra import (Poly, factor_sieve)
from .arithfun import (DivisorK, parse_function)
from .config import (DOMAINS, ExperimentConfig, SUITES)
from .correlation import (CovarianceReport, DECAY_FACTOR, covariance_experiment,
                          decay_bounded, divisor_constant_forms, hl_constant,
                          gap_experiment, gap_hypothesis, residual_decay_series,
                          shift_sum_experiment)
from .equidist import (FILTERS, ensemble_average, parse_test, twisted_average_residual,
                       unitary_oracle, weil_bound_violations)
from .errors import (DomainError, InvalidConfig, NumericError, ResourceError)
from .hayes import (HayesModulus, UnitGroup, character_rows, orthogonality_residuals)
from .lfunc import (l_polynomials, theta_classes, zero_rows)
from .parallel import default_threads
from .report import Report
from .suites import (IDENTITY_TOLERANCE, RH_TOLERANCE, run_suite)
from .symfunc import fourier_coefficients
import argparse
import logging
import sys


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_RESOURCE = 3

DECAY_HEADER = ['q', 're_measured', 'im_measured', 're_prediction', 'im_prediction',
                'residual', 'normalized']


def _int_list(text):
    try:
        return [int(x) for x in text.split(',') if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError('expected comma-separated integers, got {0!r}'.format(
            text))


def _common(parser):
    parser.add_argument('--config', help='Experiment file of `key = value` lines.')
    parser.add_argument('--q', type=_int_list, help='Field sizes, e.g. 5,7,9.')
    parser.add_argument('--p', type=int, help='Field characteristic.')
    parser.add_argument('--e', type=int, help='Extension degree.')
    parser.add_argument('--modulus', type=_int_list,
                        help='Coefficients of the field modulus, lowest first.')
    parser.add_argument('--threads', type=int)
    parser.add_argument('--seed', type=int)
    parser.add_argument('--output', help='JSON report path; stdout when omitted.')
    parser.add_argument('--csv', dest='csv_output', help='CSV table path.')
    parser.add_argument('--log-level', default='WARNING',
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR'])


def _shape(parser, *names):
    """Adds the per-command experiment options."""
    options = {'n': dict(type=int), 'delta': {}, 'ell': dict(type=int),
               'modulus-m': dict(dest='modulus_m'), 'h': dict(type=int),
               'k': dict(type=int), 'l': dict(type=int), 'alpha': {}, 'beta': {},
               'D': dict(type=int), 'exponent': dict(type=float),
               'test': {}, 'ensemble': dict(choices=FILTERS),
               'domain': dict(choices=DOMAINS), 'samples': dict(type=int)}
    for name in names:
        parser.add_argument('--' + name, **options[name])


def parse_args(argv=None):
    parser = argparse.ArgumentParser(prog='ffcorr', description=__doc__.split('\n\n')[0].strip())
    commands = parser.add_subparsers(dest='command')
    commands.required = True

    verify = commands.add_parser('verify', help='Run exact-identity suites.')
    _common(verify)
    verify.add_argument('--suite', choices=SUITES)
    verify.add_argument('--strict-parity', dest='strict_parity', action='store_true',
                        default=None)
    _shape(verify, 'n', 'ell', 'modulus-m', 'alpha', 'beta', 'k', 'delta', 'D')

    cov = commands.add_parser('cov', help='Covariance decay across field sizes.')
    _common(cov)
    _shape(cov, 'alpha', 'beta', 'n', 'delta', 'h', 'exponent', 'domain', 'k', 'l')

    lfunc = commands.add_parser('lfunc', help='Inverse roots of L-polynomials.')
    _common(lfunc)
    _shape(lfunc, 'ell', 'modulus-m')

    fourier = commands.add_parser('fourier', help='Fourier coefficients of a function.')
    _common(fourier)
    _shape(fourier, 'alpha', 'n')

    equidist = commands.add_parser('equidist', help='Ensemble averages of Theta classes.')
    _common(equidist)
    _shape(equidist, 'ell', 'modulus-m', 'test', 'ensemble', 'delta', 'samples')

    hl = commands.add_parser('hl', help='Singular series with truncation tail.')
    _common(hl)
    _shape(hl, 'delta', 'D')

    chars = commands.add_parser('chars', help='Characters of R_{ell,M}.')
    _common(chars)
    _shape(chars, 'ell', 'modulus-m')

    return parser.parse_args(argv)


SETTINGS = ('q', 'p', 'e', 'modulus', 'threads', 'seed', 'output', 'csv_output', 'suite',
            'strict_parity', 'n', 'delta', 'ell', 'modulus_m', 'h', 'k', 'l', 'alpha',
            'beta', 'D', 'exponent', 'test', 'ensemble', 'domain', 'samples')


def load_config(args):
    """File settings, overridden by flags, then by the environment."""
    config = ExperimentConfig(args.config) if args.config else ExperimentConfig()
    overrides = dict((key, getattr(args, key, None)) for key in SETTINGS)
    # --q and --p select the field exclusively.
    if overrides['q'] is not None:
        config.p = None
    elif overrides['p'] is not None:
        config.q = None
    config.update(**overrides)
    config.apply_environment()
    return config


def _threads(config):
    return config.threads or default_threads()


def _group(config, spec):
    m = Poly.parse(spec, config.modulus_m)
    return UnitGroup(HayesModulus(config.ell, m), cap=config.group_cap,
                     strict_parity=config.strict_parity, threads=_threads(config))


def cmd_verify(config, report):
    run_suite(config.suite, config, report)


def cmd_cov(config, report):
    config.require('n')
    alpha = parse_function(config.alpha)
    beta = parse_function(config.beta)
    n = config.n
    specs = config.field_specs()
    extra = {}
    if config.domain == 'gap':
        config.require('h')
        delta = Poly.parse(specs[0], config.delta)
        experiment = gap_experiment(alpha, beta, n, config.delta, config.h)
        default = 0.5 - (config.h - delta.degree)
        exponent = default if config.exponent is None else config.exponent
        extra['outside_hypothesis'] = not gap_hypothesis(n, delta, config.h)
    elif config.h is not None:
        experiment = shift_sum_experiment(alpha, beta, n, config.h)
        exponent = 0.5 if config.exponent is None else config.exponent
    else:
        experiment = covariance_experiment(alpha, beta, n, config.delta, config.domain)
        default = 1.5 if config.domain == 'all' else 1.0
        exponent = default if config.exponent is None else config.exponent
    series = residual_decay_series(experiment, [spec.q for spec in specs], exponent)
    report.add_table('decay', DECAY_HEADER, [point.csv_row() for point in series])
    for point in series:
        report.add('measured against predicted', value=point.measured,
                   reference=point.prediction, residual=point.residual,
                   normalized=point.normalized, q=point.q, exponent=exponent, **extra)
    report.add('normalized residual stays within a factor {0} of its first '
               'value'.format(DECAY_FACTOR), value=[p.normalized for p in series],
               passed=None if extra.get('outside_hypothesis') else decay_bounded(series),
               **extra)

    if config.h is None:
        for spec in specs:
            delta = Poly.parse(spec, config.delta)
            table = factor_sieve(spec, n, config.sieve_cap, config.cache_dir)
            for entry in CovarianceReport(alpha, beta, n, delta, table).entries():
                exact = entry.pop('exact')
                entry['tolerance'] = IDENTITY_TOLERANCE if exact else None
                report.add(q=spec.q, **entry)
    if isinstance(alpha, DivisorK) and isinstance(beta, DivisorK) and n >= 2:
        forms = divisor_constant_forms(n, alpha.k, beta.k)
        report.add('divisor coefficient product at (n-1,1)', value=forms['derived'],
                   reference=forms['per_factor'], printed=forms['printed'],
                   per_factor_matches=forms['per_factor_matches'],
                   printed_matches=forms['printed_matches'])


def cmd_lfunc(config, report):
    rows = []
    for spec in config.field_specs():
        group = _group(config, spec)
        lpolys = l_polynomials(group)
        thetas = theta_classes(group, threads=_threads(config))
        primitive = group.flags()[0]
        for theta in thetas:
            pure = group.k == 0 or primitive[theta.char_id]
            report.add('inverse roots lie on |u| = sqrt(q)', value=str(lpolys[theta.char_id]),
                       residual=theta.rh_residual(),
                       tolerance=RH_TOLERANCE if pure else None, q=spec.q,
                       char_id=theta.char_id, a=theta.a, dimension=theta.dimension)
        rows.extend([spec.q] + row for row in zero_rows(thetas))
    report.add_table('zeros', ['q', 'char_id', 'a', 'eigenvalues_re_im'], rows)


def cmd_fourier(config, report):
    config.require('n')
    spectrum = fourier_coefficients(parse_function(config.alpha), config.n)
    rows = list(spectrum.csv_rows())
    for lam, c in spectrum:
        report.add('Fourier coefficient', value=c, partition=str(lam))
    report.add_table('fourier', ['partition', 're', 'im'], rows)


def cmd_equidist(config, report):
    test = parse_test(config.test)
    rows = []
    series = []
    dimension = None
    for spec in config.field_specs():
        group = _group(config, spec)
        stat = ensemble_average(group, config.ensemble, test, _threads(config))
        dimension = stat.dimension
        rows.append(stat.csv_row())
        series.append(stat.normalized)
        report.add('ensemble average against the unitary integral', value=stat.average,
                   reference=stat.reference, residual=stat.residual,
                   normalized=stat.normalized, q=spec.q, size=stat.size,
                   dimension=stat.dimension, test=test.test_id)
        if group.k == 0 and group.ell >= 1 and 'delta' in config.values:
            delta = Poly.parse(spec, config.delta)
            if delta.degree == 0:
                report.add('twisted average vanishes', normalized=twisted_average_residual(
                    group, delta.lc, test, _threads(config)), q=spec.q)
                violations = weil_bound_violations(group, delta.lc)
                report.add('Gauss averages obey the Weil bound', value=violations,
                           reference=0, passed=violations == 0, q=spec.q)
    report.add_table('ensemble', ['q', 'ensemble_size', 'test_id', 're', 'im', 'normalized'],
                     rows)
    if series:
        bound = DECAY_FACTOR * max(series[0], 1e-12)
        report.add('normalized residual stays within a factor {0} of its first '
                   'value'.format(DECAY_FACTOR), value=series,
                   passed=all(x <= bound for x in series))
    if dimension and 'samples' in config.values:
        average, stderr = unitary_oracle(test, dimension, config.samples, config.seed)
        reference = test.reference(dimension)
        report.add('Haar Monte Carlo against the unitary integral', value=average,
                   reference=reference, residual=abs(average - reference), stderr=stderr,
                   passed=abs(average - reference) <= 5 * stderr + 1e-12, dimension=dimension)


def cmd_hl(config, report):
    rows = []
    for spec in config.field_specs():
        delta = Poly.parse(spec, config.delta)
        value, tail = hl_constant(delta, config.D)
        rows.append([spec.q, repr(value), repr(tail)])
        report.add('singular series truncated at degree D', value=value, tail=tail,
                   q=spec.q, D=config.D, delta=str(delta))
    report.add_table('hl', ['q', 'value', 'tail'], rows)


def cmd_chars(config, report):
    rows = []
    for spec in config.field_specs():
        group = _group(config, spec)
        by_chars, by_classes = orthogonality_residuals(group)
        report.add('orthogonality over characters', residual=by_chars,
                   tolerance=IDENTITY_TOLERANCE, q=spec.q, order=group.order)
        report.add('orthogonality over classes', residual=by_classes,
                   tolerance=IDENTITY_TOLERANCE, q=spec.q, order=group.order)
        rows.extend([spec.q] + row for row in character_rows(group))
    report.add_table('chars', ['q', 'char_id', 'exponent_vector', 'order', 'primitive', 'odd'],
                     rows)


COMMANDS = {'verify': cmd_verify,
            'cov': cmd_cov,
            'lfunc': cmd_lfunc,
            'fourier': cmd_fourier,
            'equidist': cmd_equidist,
            'hl': cmd_hl,
            'chars': cmd_chars}


def write_outputs(config, report):
    if config.output:
        report.write(config.output)
    else:
        sys.stdout.write(report.to_json())
    if config.csv_output:
        name = next(iter(report.tables)) if report.tables else None
        report.write_csv(config.csv_output, name)


def run(args):
    """Runs a parsed command line; returns the exit status."""
    try:
        config = load_config(args)
    except (InvalidConfig, TypeError) as e:
        sys.stderr.write('ffcorr: {0}\n'.format(e))
        return EXIT_USAGE

    report = Report(args.command, config.config_hash)
    status = EXIT_OK
    try:
        COMMANDS[args.command](config, report)
    except (InvalidConfig, DomainError) as e:
        sys.stderr.write('ffcorr: {0}\n'.format(e))
        return EXIT_USAGE
    except ResourceError as e:
        sys.stderr.write('ffcorr: {0}\n'.format(e))
        return EXIT_RESOURCE
    except NumericError as e:
        logger.error('%s', e)
        report.add('root extraction', passed=False, error=str(e))

    if not report.passed:
        for row in report.failures:
            logger.warning('Failed: %s', row.anchor)
        status = EXIT_FAILED
    write_outputs(config, report)
    return status


def main(argv=None):
    args = parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level), stream=sys.stderr,
                        format='%(levelname)s %(name)s: %(message)s')
    return run(args)


if __name__ == '__main__':
    sys.exit(main())
