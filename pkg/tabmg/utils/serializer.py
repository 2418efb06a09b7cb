"""
Serializes numpy arrays and JSON-like objects to text.

Floats are written with Python's shortest round-trip repr, so an array
written by `dump_json` and read back by `load_json` is bit-identical.
"""
import base64
import hashlib
import json
import numpy as np


def to_jsonable(obj):
    """
    Recursively converts numpy arrays/scalars into nested lists of Python
    floats/ints.
    """
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    elif isinstance(obj, np.generic):
        return obj.item()
    elif isinstance(obj, dict):
        return {k: to_jsonable(v) for k, v in obj.items()}
    elif isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    return obj


def serialize(obj):
    return json.dumps(to_jsonable(obj), allow_nan=False)


def deserialize(text):
    return json.loads(text)


def dump_json(obj, file_path):
    with open(file_path, 'w') as fp:
        fp.write(serialize(obj))
        fp.write('\n')


def load_json(file_path):
    with open(file_path, 'r') as fp:
        return deserialize(fp.read())


def dump_json_lines(records, file_path):
    with open(file_path, 'w') as fp:
        for record in records:
            fp.write(serialize(record))
            fp.write('\n')


def iter_json_lines(file_path):
    with open(file_path, 'r') as fp:
        for line in fp:
            line = line.strip()
            if line:
                yield deserialize(line)


def binary_hash(binary):
    """
    Low collision 16-char hash of any binary string.
    """
    s = hashlib.sha1(binary).digest()
    s = base64.b64encode(s)[:16]
    return s.decode('utf-8')


def file_hash(file_path):
    with open(file_path, 'rb') as fp:
        return binary_hash(fp.read())
