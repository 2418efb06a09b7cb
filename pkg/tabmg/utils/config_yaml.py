import os
from tabmg.utils.filesys import f_expand


def get_config_file():
    """
    Get the path to the user settings file, `~/.tabmg.yml` unless
    TABMG_CONFIG_PATH points elsewhere.
    """
    path = '~/.tabmg.yml'
    if 'TABMG_CONFIG_PATH' in os.environ:
        path = os.environ['TABMG_CONFIG_PATH']
    return f_expand(path)
