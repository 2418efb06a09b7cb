"""
Sweep report files: summary.csv, fits.csv, bounds.csv, one log-log SVG per
metric and metadata.yml.
"""
import csv
import math
import time
from benedict import BeneDict
from tabulate import tabulate
import tabmg
import tabmg.utils as U
from tabmg.framework import format_number
from .sweep import GAP_FLOOR


SUMMARY_HEADER = ['algorithm', 'T', 'eta', 'gap', 'seconds']
FITS_HEADER = ['algorithm', 'exponent', 'intercept', 'r2']
BOUNDS_HEADER = ['algorithm', 'T', 'gap', 'bound', 'pass']

SVG_WIDTH = 640
SVG_HEIGHT = 480
_MARGIN = {'left': 70, 'right': 150, 'top': 30, 'bottom': 50}
_PADDING = 0.1
_COLORS = ['#1f77b4', '#d62728', '#2ca02c', '#ff7f0e', '#9467bd',
           '#8c564b', '#e377c2', '#7f7f7f', '#bcbd22', '#17becf']


def _write_csv(file_path, header, rows):
    try:
        with open(file_path, 'w', newline='') as fp:
            writer = csv.writer(fp, lineterminator='\n')
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as e:
        raise OSError('cannot write {}: {}'.format(file_path, e)) from e


def summary_rows(report):
    rows = []
    for c in report.cells:
        if not c.ok:
            continue
        rows.append([c.label, str(c.T), format_number(c.eta),
                     format_number(c.gap), format_number(c.seconds)])
    return rows


def fit_rows(report):
    return [[f.label, format_number(f.exponent), format_number(f.intercept),
             format_number(f.r_squared)]
            for f in report.fits if f.skipped is None]


def bound_rows(report):
    return [[b.label, str(b.T), format_number(b.gap), format_number(b.bound),
             'pass' if b.passed else 'fail']
            for b in report.bound_checks]


# ======================== SVG ========================
def _log_extent(values):
    lo, hi = math.log10(min(values)), math.log10(max(values))
    span = hi - lo
    if span <= 0:
        span = 1.0
        lo, hi = lo - 0.5, hi + 0.5
    return lo - _PADDING * span, hi + _PADDING * span


class _Axes(object):
    "maps log10 data coordinates to pixels"
    def __init__(self, x_range, y_range):
        self.x_range = x_range
        self.y_range = y_range
        self.left = _MARGIN['left']
        self.top = _MARGIN['top']
        self.width = SVG_WIDTH - _MARGIN['left'] - _MARGIN['right']
        self.height = SVG_HEIGHT - _MARGIN['top'] - _MARGIN['bottom']

    def px(self, lx):
        lo, hi = self.x_range
        return self.left + (lx - lo) / (hi - lo) * self.width

    def py(self, ly):
        lo, hi = self.y_range
        return self.top + (hi - ly) / (hi - lo) * self.height

    def ticks(self, axis):
        lo, hi = self.x_range if axis == 'x' else self.y_range
        return list(range(int(math.ceil(lo)), int(math.floor(hi)) + 1))


def _fmt(x):
    return '{:.3f}'.format(x)


def render_svg(series, metric, timestamp=None):
    """
    Args:
        series: list of (label, [(T, gap)], fit or None) with fit an
            (exponent, intercept) pair in natural-log space
        metric: y axis caption

    Returns:
        SVG 1.1 document as str. The inner <svg id="plot-area"> has the
        padded log10 data extent as viewBox, y axis negated.
    """
    xs = [T for _, points, _ in series for T, _ in points]
    ys = [max(g, GAP_FLOOR) for _, points, _ in series for _, g in points]
    ax = _Axes(_log_extent(xs), _log_extent(ys))
    x0, x1 = ax.x_range
    y0, y1 = ax.y_range
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        '<!-- generated {} -->'.format(
            timestamp or time.strftime('%Y-%m-%d %H:%M:%S')),
        '<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        'width="{w}" height="{h}" viewBox="0 0 {w} {h}">'
        .format(w=SVG_WIDTH, h=SVG_HEIGHT),
        '<rect x="{}" y="{}" width="{}" height="{}" fill="none" '
        'stroke="black"/>'.format(ax.left, ax.top, ax.width, ax.height),
    ]
    for k in ax.ticks('x'):
        px = _fmt(ax.px(k))
        lines.append('<line x1="{0}" y1="{1}" x2="{0}" y2="{2}" '
                     'stroke="black"/>'.format(px, ax.top + ax.height,
                                               ax.top + ax.height + 5))
        lines.append('<text x="{}" y="{}" font-size="12" '
                     'text-anchor="middle">1e{}</text>'
                     .format(px, ax.top + ax.height + 20, k))
    for k in ax.ticks('y'):
        py = _fmt(ax.py(k))
        lines.append('<line x1="{1}" y1="{0}" x2="{2}" y2="{0}" '
                     'stroke="black"/>'.format(py, ax.left - 5, ax.left))
        lines.append('<text x="{}" y="{}" font-size="12" '
                     'text-anchor="end">1e{}</text>'
                     .format(ax.left - 8, py, k))
    lines.append('<text x="{}" y="{}" font-size="13" text-anchor="middle">'
                 'T</text>'.format(ax.left + ax.width / 2, SVG_HEIGHT - 10))
    lines.append('<text x="15" y="{0}" font-size="13" text-anchor="middle" '
                 'transform="rotate(-90 15 {0})">{1}</text>'
                 .format(ax.top + ax.height / 2, metric))

    lines.append('<svg id="plot-area" x="{}" y="{}" width="{}" height="{}" '
                 'viewBox="{} {} {} {}" preserveAspectRatio="none">'
                 .format(ax.left, ax.top, ax.width, ax.height,
                         _fmt(x0), _fmt(-y1), _fmt(x1 - x0), _fmt(y1 - y0)))
    for k, (label, points, fit) in enumerate(series):
        if fit is None:
            continue
        exponent, intercept = fit
        ln10 = math.log(10)
        # log10 gap = exponent * log10 T + intercept / ln 10
        ends = [(lx, exponent * lx + intercept / ln10) for lx in (x0, x1)]
        lines.append('<polyline points="{}" fill="none" stroke="{}" '
                     'stroke-width="1.5" vector-effect="non-scaling-stroke"/>'
                     .format(' '.join('{},{}'.format(_fmt(lx), _fmt(-ly))
                                      for lx, ly in ends),
                             _COLORS[k % len(_COLORS)]))
    lines.append('</svg>')

    for k, (label, points, fit) in enumerate(series):
        color = _COLORS[k % len(_COLORS)]
        for T, gap in points:
            lines.append('<circle cx="{}" cy="{}" r="3.5" fill="{}"/>'.format(
                _fmt(ax.px(math.log10(T))),
                _fmt(ax.py(math.log10(max(gap, GAP_FLOOR)))), color))
        legend_y = ax.top + 15 + 18 * k
        lines.append('<circle cx="{}" cy="{}" r="4" fill="{}"/>'.format(
            ax.left + ax.width + 15, legend_y - 4, color))
        caption = label if fit is None else '{} ({:.3f})'.format(label, fit[0])
        lines.append('<text x="{}" y="{}" font-size="12">{}</text>'.format(
            ax.left + ax.width + 25, legend_y, caption))
    lines.append('</svg>')
    return '\n'.join(lines) + '\n'


def _series(report, metric):
    fits = {f.label: f for f in report.fits}
    series = []
    for label in report.labels:
        points = [(c.T, c.gap) for c in report.cells_of(label)
                  if c.ok and c.metric == metric]
        if not points:
            continue
        fit = fits.get(label)
        if fit is not None and fit.skipped is None:
            fit = (fit.exponent, fit.intercept)
        else:
            fit = None
        series.append((label, points, fit))
    return series


# ======================== report ========================
def report_metadata(report):
    return {
        'version': tabmg.__version__,
        'plan': report.plan.to_dict(),
        'game': report.game_info,
        'errors': [{'algorithm': c.label, 'T': c.T, 'error': c.error}
                   for c in report.errors],
        'skipped_fits': {f.label: f.skipped
                         for f in report.fits if f.skipped is not None},
    }


def emit_report(report, out_dir):
    """
    Returns:
        list of written file paths
    """
    out_dir = U.f_expand(out_dir)
    try:
        U.f_mkdir(out_dir)
    except OSError as e:
        raise OSError('cannot create output directory {}: {}'
                      .format(out_dir, e)) from e
    written = []
    for name, header, rows in [
        ('summary.csv', SUMMARY_HEADER, summary_rows(report)),
        ('fits.csv', FITS_HEADER, fit_rows(report)),
        ('bounds.csv', BOUNDS_HEADER, bound_rows(report)),
    ]:
        path = U.f_join(out_dir, name)
        _write_csv(path, header, rows)
        written.append(path)

    for metric in ('negap', 'ccegap'):
        series = _series(report, metric)
        if not series:
            continue
        path = U.f_join(out_dir, metric + '.svg')
        try:
            with open(path, 'w') as fp:
                fp.write(render_svg(series, metric))
        except OSError as e:
            raise OSError('cannot write {}: {}'.format(path, e)) from e
        written.append(path)

    path = U.f_join(out_dir, 'metadata.yml')
    BeneDict(report_metadata(report)).dump_yaml_file(path)
    written.append(path)
    return written


def console_summary(report):
    """
    Final gap per algorithm and T, fitted exponents and failed bounds.
    """
    table = []
    for f in report.fits:
        cells = [c for c in report.cells_of(f.label) if c.ok]
        final = cells[-1] if cells else None
        table.append([
            f.label,
            final.T if final else '-',
            U.fformat(final.gap, 6) if final else 'failed',
            U.fformat(f.exponent, 3) if f.skipped is None else f.skipped,
        ])
    text = tabulate(table, headers=['algorithm', 'T', 'gap', 'exponent'],
                    tablefmt='simple', numalign='left')
    failed = [b for b in report.bound_checks if not b.passed]
    if report.bound_checks:
        text += '\nbound checks: {} passed, {} failed'.format(
            len(report.bound_checks) - len(failed), len(failed))
    return text
