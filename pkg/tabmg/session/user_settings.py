from benedict import BeneDict
import tabmg.utils as U
from .config import Config, extend_config
from .default_configs import BASE_SESSION_CONFIG, BASE_SWEEP_CONFIG


def load_user_settings(path=None):
    """
    Reads ~/.tabmg.yml (or TABMG_CONFIG_PATH). A missing file means defaults.

    Returns:
        (session_config, sweep_config) both extended with their defaults
    """
    if path is None:
        path = U.get_config_file()
    settings = BeneDict()
    if U.f_exists(path):
        settings = BeneDict.load_yaml_file(path) or BeneDict()
    session = Config(settings.get('session') or {}).to_dict()
    sweep = Config(settings.get('sweep') or {}).to_dict()
    return (extend_config(session, BASE_SESSION_CONFIG),
            extend_config(sweep, BASE_SWEEP_CONFIG))
