import csv
import numpy as np
import tabmg.utils as U


def format_number(x):
    "17 significant digits, empty for a missing value"
    if x is None:
        return ''
    return '{:.17g}'.format(x)


class TraceRecord(object):
    """
    Quantities recorded at one checkpoint. Diagnostics fields are None when
    diagnostics are off.
    """
    def __init__(self, t, negap, layer_gaps, max_reg=None, max_delta=None,
                 elapsed=0.0, recursion_violations=None):
        self.t = t
        self.negap = negap
        self.layer_gaps = list(layer_gaps)
        self.max_reg = max_reg
        self.max_delta = max_delta
        self.elapsed = elapsed
        self.recursion_violations = recursion_violations

    def row(self):
        return ([str(self.t), format_number(self.negap)]
                + [format_number(g) for g in self.layer_gaps]
                + [format_number(self.max_reg),
                   format_number(self.max_delta),
                   format_number(self.elapsed)])

    def __repr__(self):
        return 'TraceRecord(t={}, negap={})'.format(self.t, self.negap)


class Trace(object):
    def __init__(self, horizon):
        self.horizon = horizon
        self.records = []

    def append(self, record):
        self.records.append(record)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def __getitem__(self, i):
        return self.records[i]

    @property
    def final(self):
        return self.records[-1] if self.records else None

    def header(self):
        return (['t', 'negap']
                + ['negap_layer_{}'.format(h)
                   for h in range(1, self.horizon + 1)]
                + ['max_reg', 'max_delta', 'elapsed_s'])

    def write_csv(self, file_path):
        file_path = U.f_expand(file_path)
        U.f_mkdir_in_path(file_path)
        with open(file_path, 'w', newline='') as fp:
            writer = csv.writer(fp, lineterminator='\n')
            writer.writerow(self.header())
            for record in self.records:
                writer.writerow(record.row())

    def points(self):
        "[(t, negap)]"
        return [(r.t, r.negap) for r in self.records]


class CCETraceRecord(object):
    def __init__(self, t, ccegap, max_reg=None, elapsed=0.0):
        self.t = t
        self.ccegap = ccegap
        self.max_reg = max_reg
        self.elapsed = elapsed

    def row(self):
        return [str(self.t), format_number(self.ccegap),
                format_number(self.max_reg), format_number(self.elapsed)]


class CCETrace(Trace):
    def header(self):
        return ['t', 'ccegap', 'max_reg', 'elapsed_s']

    def points(self):
        return [(r.t, r.ccegap) for r in self.records]


def fit_rate(points):
    """
    Least-squares fit of log(gap) = exponent * log(T) + intercept.

    Args:
        points: list of (T, gap)

    Returns:
        (exponent, intercept, r_squared)
    """
    if len(points) < 3:
        raise ValueError('rate fit needs at least 3 points, got {}'
                         .format(len(points)))
    T = np.array([p[0] for p in points], dtype=np.float64)
    gap = np.array([p[1] for p in points], dtype=np.float64)
    if np.any(gap <= 0):
        raise ValueError('rate fit needs positive gaps; floor exact zeros '
                         'before fitting')
    if len(np.unique(T)) < 2:
        raise ValueError('rate fit needs at least two distinct T values')
    x, y = np.log(T), np.log(gap)
    exponent, intercept = np.polyfit(x, y, 1)
    residual = y - (exponent * x + intercept)
    total = ((y - y.mean()) ** 2).sum()
    r_squared = 1.0 - (residual ** 2).sum() / total if total > 0 else 1.0
    return float(exponent), float(intercept), float(r_squared)
