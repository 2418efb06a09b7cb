"""
tabmg-default-config: installs the sample settings file at the user
settings path. An existing file is kept as a .bak backup.
"""
from importlib import resources
import tabmg.utils as U
from tabmg.session.user_settings import load_user_settings

_TEMPLATE = 'sample_tabmg.yml'


def write_default_settings(path=None):
    if path is None:
        path = U.get_config_file()
    template = resources.files('tabmg').joinpath(_TEMPLATE).read_text()
    U.f_mkdir_in_path(path)
    U.move_with_backup(path)
    with open(U.f_expand(str(path)), 'w') as fp:
        fp.write(template)
    # the template must itself pass validation
    load_user_settings(path)
    return path


def main():
    path = write_default_settings()
    print('tabmg settings written to', path)


if __name__ == "__main__":
    main()
