"""
Path helpers. Every function expands `~` before touching the file system.
"""
import os
import shutil

f_ext = os.path.splitext

f_expand = os.path.expanduser


def f_exists(path):
    return os.path.exists(f_expand(path))


def f_join(*fpaths):
    return f_expand(os.path.join(*fpaths))


def f_mkdir(fpath):
    "like mkdir -p"
    os.makedirs(f_expand(fpath), exist_ok=True)


def f_mkdir_in_path(fpath):
    "creates the parent directories of a file path"
    parent = os.path.dirname(f_expand(fpath))
    if parent:
        f_mkdir(parent)


def f_has_ext(fpath, *exts):
    return f_ext(str(fpath))[1].lower() in exts


def move_with_backup(path, suffix='.bak'):
    """
    Frees `path` by renaming an existing file to path + suffix. Older
    backups are pushed further down the chain (.bak.bak, ...).
    """
    path = f_expand(str(path))
    if not os.path.exists(path):
        return
    backup = path + suffix
    move_with_backup(backup, suffix)
    shutil.move(path, backup)
