"""
Experiment configuration files.

An experiment file is UTF-8 text with one `key = value` setting per line;
`#` starts a comment and blank lines are ignored:

    # covariance decay for the von Mangoldt function
    q = 5,7,9,11
    n = 5
    delta = 1
    alpha = Lambda
    beta = Lambda

Settings are exposed as attributes of ExperimentConfig through descriptors
that convert between the stored text and Python values.
"""

from .algebra import (DEFAULT_SIEVE_CAP, FieldSpec)
from .errors import InvalidConfig
from .hayes import DEFAULT_GROUP_CAP
from .symfunc import Partition
import hashlib
import io
import os
import re


# Environment variable overriding the cache_dir setting.
CACHE_ENV = 'FFCORR_CACHE_DIR'

_LINE = re.compile(r'^(?P<key>[A-Za-z_][A-Za-z0-9_]*)\s*=\s*(?P<value>.*?)\s*$')


class Setting(object):
    """Generic descriptor class for accessing one configuration key."""
    def __init__(self, name, default=None, read_only=False):
        self.name = name
        self.default = default
        self.read_only = read_only

    def __get__(self, instance, owner=None):
        if instance is None:
            return self
        try:
            raw = instance.values[self.name]
        except KeyError:
            return self.default
        else:
            return self.from_text(raw)

    def __set__(self, instance, value):
        if self.read_only is True:
            raise AttributeError('Setting {0} is read-only'.format(self.name))
        new_value = self.to_text(instance, value)
        if new_value is not None:
            instance.values[self.name] = new_value

        # None removes the key, ignoring keys that were never set.
        else:
            instance.values.pop(self.name, None)

    def from_text(self, value):
        """Default converter for reading the stored text.

        Can be overridden in subclasses to provide custom conversion.
        """
        return str(value)

    def to_text(self, instance, value):
        """Default converter for storing a user value.

        Subclasses may implement custom conversions from user values by
        overriding this method. Must return a string or None.
        """
        if (value is not None) and (not isinstance(value, str)):
            raise TypeError('{0} must be a string'.format(self.name))
        return value


class IntSetting(Setting):
    """An integer, optionally bounded below."""
    def __init__(self, name, default=None, minimum=None):
        super(IntSetting, self).__init__(name, default)
        self.minimum = minimum

    def from_text(self, raw):
        try:
            value = int(raw)
        except ValueError:
            raise InvalidConfig('{0} must be an integer, got {1!r}.'.format(self.name, raw))
        if self.minimum is not None and value < self.minimum:
            raise InvalidConfig('{0} must be at least {1}, got {2}.'.format(
                self.name, self.minimum, value))
        return value

    def to_text(self, unused, value):
        if value is None:
            return None
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeError('{0} must be an integer.'.format(self.name))
        text = str(value)
        self.from_text(text)
        return text


class FloatSetting(Setting):
    def from_text(self, raw):
        try:
            return float(raw)
        except ValueError:
            raise InvalidConfig('{0} must be a number, got {1!r}.'.format(self.name, raw))

    def to_text(self, unused, value):
        if value is None:
            return None
        if not isinstance(value, (int, float)):
            raise TypeError('{0} must be a number.'.format(self.name))
        return repr(float(value))


class IntListSetting(Setting):
    """Comma-separated integers, e.g. the list of field sizes."""
    def from_text(self, raw):
        try:
            values = [int(x) for x in raw.split(',') if x.strip()]
        except ValueError:
            raise InvalidConfig('{0} must be a comma-separated list of integers, '
                                'got {1!r}.'.format(self.name, raw))
        if not values:
            raise InvalidConfig('{0} is empty.'.format(self.name))
        return values

    def to_text(self, unused, value):
        if value is None:
            return None
        if isinstance(value, int):
            value = [value]
        if not all(isinstance(x, int) for x in value):
            raise TypeError('{0} must be a list of integers.'.format(self.name))
        return ','.join(str(x) for x in value)


class BoolSetting(Setting):
    """Converts between `true`/`false` and bool."""
    def from_text(self, raw):
        lowered = raw.lower()
        if lowered not in ('true', 'false'):
            raise InvalidConfig('{0} must be true or false, got {1!r}.'.format(self.name, raw))
        return lowered == 'true'

    def to_text(self, unused, value):
        if value is None:
            return None
        if not isinstance(value, bool):
            raise TypeError('{0} must be a bool.'.format(self.name))

        # Boolean values are stored in lower-case.
        return str(value).lower()


class PartitionListSetting(Setting):
    """Partitions written as `(3,1) (2,2)`."""
    def from_text(self, raw):
        groups = re.findall(r'\([^)]*\)', raw)
        if not groups or re.sub(r'\([^)]*\)|[\s,;]', '', raw):
            raise InvalidConfig('{0} must list partitions like (3,1) (2,2); got {1!r}.'.format(
                self.name, raw))
        try:
            return [Partition.parse(g) for g in groups]
        except ValueError as e:
            raise InvalidConfig('{0}: {1}'.format(self.name, e))

    def to_text(self, unused, value):
        if value is None:
            return None
        return ' '.join(str(p if isinstance(p, Partition) else Partition(p)) for p in value)


class ChoiceSetting(Setting):
    def __init__(self, name, choices, default=None):
        super(ChoiceSetting, self).__init__(name, default)
        self.choices = choices

    def from_text(self, raw):
        if raw not in self.choices:
            raise InvalidConfig('{0} must be one of {1}; got {2!r}.'.format(
                self.name, ', '.join(self.choices), raw))
        return raw

    def to_text(self, instance, value):
        text = super(ChoiceSetting, self).to_text(instance, value)
        if text is not None:
            self.from_text(text)
        return text


SUITES = ('identities', 'rh', 'fourier', 'means', 'hl', 'chars', 'all')

DOMAINS = ('all', 'monic', 'gap')


class ExperimentConfig(object):
    """All parameters of one experiment; see the module docstring for the
    file format."""
    p = IntSetting('p', minimum=2)
    e = IntSetting('e', default=1, minimum=1)
    modulus = IntListSetting('modulus')
    q = IntListSetting('q')
    n = IntSetting('n', minimum=1)
    delta = Setting('delta', default='1')
    ell = IntSetting('ell', default=0, minimum=0)
    modulus_m = Setting('modulus_m', default='1')
    h = IntSetting('h', minimum=0)
    k = IntSetting('k', default=2, minimum=2)
    l = IntSetting('l', default=2, minimum=2)
    alpha = Setting('alpha', default='Lambda')
    beta = Setting('beta', default='Lambda')
    partitions = PartitionListSetting('partitions')
    D = IntSetting('D', default=12, minimum=1)
    exponent = FloatSetting('exponent')
    seed = IntSetting('seed', default=0, minimum=0)
    threads = IntSetting('threads', minimum=1)
    sieve_cap = IntSetting('sieve_cap', default=DEFAULT_SIEVE_CAP, minimum=1)
    group_cap = IntSetting('group_cap', default=DEFAULT_GROUP_CAP, minimum=1)
    output = Setting('output')
    csv_output = Setting('csv_output')
    suite = ChoiceSetting('suite', SUITES, default='identities')
    strict_parity = BoolSetting('strict_parity', default=False)
    cache_dir = Setting('cache_dir')
    domain = ChoiceSetting('domain', DOMAINS, default='all')
    test = Setting('test', default='tr1')
    ensemble = ChoiceSetting('ensemble', ('all', 'primitive', 'primitive_odd'),
                             default='primitive_odd')
    samples = IntSetting('samples', default=10 ** 5, minimum=1)

    def __init__(self, source=None):
        self.values = {}
        if source is not None:
            self.parse(source)

    @classmethod
    def keys(cls):
        """Names of every recognized setting."""
        return sorted(name for name, attr in vars(cls).items() if isinstance(attr, Setting))

    def parse(self, source):
        """Reads settings from a filename or a text buffer."""
        # Accept both filename strings for normal usage, and buffer objects
        # for unit tests.
        try:
            f = io.open(source, encoding='UTF-8')
        except TypeError:
            f = source
        except OSError as e:
            raise InvalidConfig('Cannot read configuration {0}: {1}'.format(source, e))

        known = self.keys()
        with f:
            for lineno, line in enumerate(f, 1):
                stripped = line.split('#', 1)[0].strip()
                if not stripped:
                    continue
                match = _LINE.match(stripped)
                if match is None:
                    raise InvalidConfig('Line {0}: expected `key = value`, got {1!r}.'.format(
                        lineno, stripped))
                key = match.group('key')
                if key not in known:
                    raise InvalidConfig('Line {0}: unknown setting {1!r}.'.format(lineno, key))
                self.values[key] = match.group('value')
        self.validate()

    def validate(self):
        """Converts every stored value once so errors surface early."""
        for key in list(self.values):
            getattr(self, key)
        if self.p is not None and self.q is not None:
            raise InvalidConfig('Give either q or p (with e and modulus), not both.')

    def update(self, **overrides):
        """Sets every override that is not None; command-line flags use this
        to take precedence over file values."""
        for key, value in overrides.items():
            if value is None:
                continue
            if key not in self.keys():
                raise InvalidConfig('Unknown setting {0!r}.'.format(key))
            setattr(self, key, value)
        self.validate()

    def apply_environment(self, environ=None):
        """The cache directory may be overridden from the environment."""
        environ = os.environ if environ is None else environ
        if environ.get(CACHE_ENV):
            self.cache_dir = environ[CACHE_ENV]

    def dump(self):
        """Canonical text form: sorted `key = value` lines."""
        return ''.join('{0} = {1}\n'.format(key, self.values[key]) for key in sorted(self.values))

    @property
    def config_hash(self):
        return hashlib.sha256(self.dump().encode('UTF-8')).hexdigest()

    def write(self, filename):
        """Outputs the canonical form to a file name or buffer."""
        text = self.dump()
        try:
            f = io.open(filename, 'w', encoding='UTF-8')

        # Buffer objects are rewound so tests can read them back.
        except TypeError:
            filename.write(text)
            filename.seek(0)

        else:
            with f:
                f.write(text)

    def field_specs(self):
        """The fields to run on: one from p, e, modulus or one per entry of q."""
        try:
            if self.p is not None:
                return [FieldSpec(self.p, self.e, self.modulus)]
            if self.q is not None:
                return [FieldSpec.of_order(q) for q in self.q]
        except ValueError as e:
            raise InvalidConfig(str(e))
        raise InvalidConfig('No field given; set q or p.')

    def require(self, *keys):
        """Raises InvalidConfig unless every key has a value."""
        missing = [key for key in keys if getattr(self, key) is None]
        if missing:
            raise InvalidConfig('Missing required setting(s): {0}.'.format(', '.join(missing)))
