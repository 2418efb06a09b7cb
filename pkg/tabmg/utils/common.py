import time
from enum import Enum, EnumMeta


def _type_name(type_):
    if isinstance(type_, tuple):
        return ' or '.join(_type_name(t) for t in type_)
    module = getattr(type_, '__module__', 'builtins')
    if module == 'builtins':
        return type_.__qualname__
    return '{}.{}'.format(module, type_.__qualname__)


def assert_type(x, expected_type, message=''):
    if not isinstance(x, expected_type):
        raise AssertionError('{}expected type `{}`, actual type `{}`'.format(
            message + ': ' if message else '',
            _type_name(expected_type), _type_name(type(x))))
    return True


def _option_key(option):
    return option.strip().lower().replace('-', '_')


class _OptionLookupMeta(EnumMeta):
    """
    Kind['nash-pi'] and Kind['Nash_PI'] both resolve Kind.nash_pi; unknown
    names raise ValueError listing the choices.
    """
    def __getitem__(cls, option):
        if isinstance(option, cls):
            return option
        assert_type(option, str)
        key = _option_key(option)
        members = cls.__members__
        if key not in members:
            raise ValueError('"{}" is not a valid {}, expected one of {}'
                             .format(option, cls.__name__,
                                     [m.cli_name for m in cls]))
        return members[key]


class StringEnum(Enum, metaclass=_OptionLookupMeta):
    """
    Options declared with `auto()` take their own name as value. Config
    files and the CLI spell them with dashes, see `cli_name`.
    """
    def _generate_next_value_(name, start, count, last_values):
        return name

    @property
    def cli_name(self):
        return self.name.replace('_', '-')


def get_enum(enum_class, option):
    """
    Args:
        option: a member of enum_class or its name, any case, `-` or `_`
    """
    assert issubclass(enum_class, StringEnum), enum_class
    return enum_class[option]


def fformat(float_num, precision):
    "fixed point without trailing zeros"
    assert isinstance(precision, int) and precision > 0
    text = '{:.{}f}'.format(float_num, precision)
    if '.' in text:
        text = text.rstrip('0').rstrip('.')
    return text


class AutoInitializeMeta(type):
    """
    Runs obj._initialize() once the whole __init__ chain has returned, so a
    base class can compute state from fields its subclasses set.
    """
    def __call__(cls, *args, **kwargs):
        obj = super().__call__(*args, **kwargs)
        if not hasattr(obj, '_initialize'):
            raise TypeError('{} uses AutoInitializeMeta but has no '
                            '_initialize()'.format(cls.__name__))
        obj._initialize()
        return obj


class Timer(object):
    """
    with Timer() as timer:
        ...
    timer.interval  # seconds

    `timer.elapsed()` can be polled inside the block. Objects that time a
    run across several methods call `start()` and `stop()` instead.
    """
    def __init__(self):
        self.start_time = None
        self.interval = None

    def start(self):
        self.start_time = time.perf_counter()
        self.interval = None
        return self

    def stop(self):
        self.interval = time.perf_counter() - self.start_time
        return self.interval

    def __enter__(self):
        return self.start()

    def __exit__(self, *args):
        self.stop()

    def elapsed(self):
        if self.interval is not None:
            return self.interval
        return time.perf_counter() - self.start_time
