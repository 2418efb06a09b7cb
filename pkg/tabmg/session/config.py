"""
Config dicts with attribute access, and defaults with typed placeholders.

A default value written as a placeholder marks a required entry:
    _int_ _float_ _num_ _bool_ _str_ _list_ _dict_ _singleton_ _object_
    _enum[a, b, c]_   (a string naming one option, `-` and `_` interchangeable)
"""
import json
import re
import yaml
import tabmg.utils as U


class ConfigError(Exception):
    pass


def _is_int(x):
    return isinstance(x, int) and not isinstance(x, bool)


_PLACEHOLDERS = {
    '_object_': ('anything', lambda x: True),
    '_singleton_': ('a singleton (not a list or dict)',
                    lambda x: not isinstance(x, (list, dict))),
    '_list_': ('a list', lambda x: isinstance(x, list)),
    '_dict_': ('a dict', lambda x: isinstance(x, dict)),
    '_int_': ('an integer', _is_int),
    '_float_': ('a float', lambda x: isinstance(x, float)),
    '_num_': ('a number', lambda x: _is_int(x) or isinstance(x, float)),
    '_str_': ('a string', lambda x: isinstance(x, str)),
    '_bool_': ('a boolean', lambda x: isinstance(x, bool)),
}

_ENUM_PLACEHOLDER = re.compile(r'^_enum\[(.*)\]_$')


def _placeholder(value):
    """
    Returns:
        (description, check) if `value` is a placeholder, else None
    """
    if not isinstance(value, str):
        return None
    key = value.lower()
    if key in _PLACEHOLDERS:
        return _PLACEHOLDERS[key]
    match = _ENUM_PLACEHOLDER.match(key)
    if match is None:
        return None
    options = [o.strip() for o in match.group(1).split(',') if o.strip()]
    if not options:
        raise ConfigError('"{}" lists no options'.format(value))

    def check(x):
        return isinstance(x, str) and x.lower().replace('_', '-') in options
    return 'one of [{}]'.format(', '.join(options)), check


def _contains_placeholder(d):
    return any(_placeholder(v) is not None
               or (isinstance(v, dict) and _contains_placeholder(v))
               for v in d.values())


def _where(path, key):
    return 'key "{}"'.format('.'.join(path + [key]))


def _fill(config, defaults, path):
    for key, default in defaults.items():
        required = _placeholder(default)
        if key not in config:
            if required is not None:
                raise ConfigError('{} is required and must be {}'
                                  .format(_where(path, key), required[0]))
            if isinstance(default, dict) and _contains_placeholder(default):
                raise ConfigError('{} is missing but has required entries'
                                  .format(_where(path, key)))
            config[key] = default
            continue

        value = config[key]
        if required is not None:
            if _placeholder(value) is not None:
                # a default that is itself extended later
                if value != default:
                    raise ConfigError('{} placeholder "{}" does not match '
                                      '"{}"'.format(_where(path, key),
                                                    value, default))
            elif not required[1](value):
                raise ConfigError('{} must be {}, got {!r}'.format(
                    _where(path, key), required[0], value))
        elif isinstance(default, dict):
            if not isinstance(value, dict):
                raise ConfigError('{} must be a dict, got {!r}'
                                  .format(_where(path, key), value))
            config[key] = _fill(value, default, path + [key])
        elif isinstance(value, dict):
            raise ConfigError('{} must not be a dict'
                              .format(_where(path, key)))
    return config


_RESERVED_NAMES = frozenset(['keys', 'items', 'values', 'get', 'copy',
                             'update', 'extend', 'load_file', 'dump_file',
                             'to_dict'])

_FILE_EXTS = ('.json', '.yaml', '.yml')


def _check_file_ext(file_path):
    if not U.f_has_ext(file_path, *_FILE_EXTS):
        raise ConfigError('config file must be .json, .yaml or .yml: {}'
                          .format(file_path))


class Config(dict):
    """
    Dict with attribute access. Nested dicts, also inside lists, are
    converted to Config on assignment. A missing attribute raises
    ConfigError.
    """
    def __init__(self, d=None, **kwargs):
        super().__init__()
        self.update(dict(d or {}, **kwargs))

    def _wrap(self, value):
        if isinstance(value, Config):
            return value
        if isinstance(value, dict):
            return Config(value)
        if isinstance(value, (list, tuple)):
            return [self._wrap(v) if isinstance(v, dict) else v
                    for v in value]
        return value

    def __setattr__(self, name, value):
        if name in _RESERVED_NAMES:
            raise ConfigError('"{}" is a Config method and cannot be a key'
                              .format(name))
        value = self._wrap(value)
        super().__setattr__(name, value)
        super().__setitem__(name, value)

    __setitem__ = __setattr__

    def __getattr__(self, key):
        # only called when normal lookup fails
        if key.startswith('__'):
            raise AttributeError(key)
        raise ConfigError('config key "{}" missing'.format(key))

    def update(self, other):
        for k, v in other.items():
            self[k] = v

    def to_dict(self):
        def plain(value):
            if isinstance(value, Config):
                return value.to_dict()
            if isinstance(value, (list, tuple)):
                return [plain(v) for v in value]
            return value
        return {k: plain(v) for k, v in self.items()}

    def copy(self):
        return Config(self.to_dict())

    def extend(self, default_config):
        "fills missing keys in place"
        U.assert_type(default_config, dict)
        return _fill(self, default_config, [])

    @classmethod
    def load_file(cls, file_path):
        file_path = str(file_path)
        _check_file_ext(file_path)
        with open(U.f_expand(file_path)) as fp:
            if file_path.endswith('.json'):
                return cls(json.load(fp))
            return cls(yaml.safe_load(fp) or {})

    def dump_file(self, file_path):
        file_path = str(file_path)
        _check_file_ext(file_path)
        with open(U.f_expand(file_path), 'w') as fp:
            if file_path.endswith('.json'):
                json.dump(self.to_dict(), fp, indent=4)
            else:
                yaml.safe_dump(self.to_dict(), fp, indent=4,
                               default_flow_style=False)


def extend_config(config, default_config):
    """
    Returns:
        Config: `config` with every key of `default_config` it lacks

    Raises:
        ConfigError if a required entry is missing or has the wrong type
    """
    U.assert_type(config, dict)
    U.assert_type(default_config, dict)
    return Config(_fill(config, default_config, []))
