import os
import numpy as np
import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
plt.rcParams.update({
    "axes.facecolor": "white",
    "axes.edgecolor": "lightgray",
    "grid.color": "lightgray",
    "figure.facecolor": "white",
    "savefig.facecolor": "white"})


def occupancy_array(d):
    """I x n array: entry (i, a-1) is i+1 when mark a belongs to ruler i, 0 when the mark is free."""
    array = np.zeros([d.I, d.n], dtype=int)
    for i, r in enumerate(d.rulers):
        for a in r:
            array[i, a - 1] = i + 1
    return array


def plot_dgr(d, out_file, figure_format='png', title=None):
    """Occupancy strip of a DGR: one row per ruler, one column per mark of {1..n}."""
    array = occupancy_array(d).astype(float)
    array[array == 0] = np.nan

    fig, axes = plt.subplots(2, 1, figsize=(max(6, d.n / 8), 1 + 0.4 * (d.I + 1)),
                             gridspec_kw={'height_ratios': [d.I, 1]}, sharex=True)
    ax = axes[0]
    ax.imshow(array, aspect='auto', interpolation='none', cmap='tab20',
              extent=(0.5, d.n + 0.5, d.I + 0.5, 0.5))
    ax.set_yticks(range(1, d.I + 1))
    ax.set_ylabel('ruler')
    if title is None:
        title = f"({d.I},{d.J},{d.n})-DGR" + (' (regular)' if d.is_regular() else '')
    ax.set_title(title)

    # free marks
    used = np.zeros(d.n)
    for a in d.marks:
        used[a - 1] = 1
    axes[1].bar(np.arange(1, d.n + 1), 1 - used, width=1.0, color='gray')
    axes[1].set_yticks([])
    axes[1].set_xlabel('mark')
    axes[1].set_xlim(0.5, d.n + 0.5)

    out_file = f'{os.path.splitext(out_file)[0]}.{figure_format}'
    os.makedirs(os.path.dirname(os.path.abspath(out_file)), exist_ok=True)
    fig.savefig(out_file, bbox_inches='tight')
    plt.close(fig)
    return out_file


def plot_descent(results, out_file, figure_format='png'):
    """m levels attempted at each descent level, successes filled, with the IJ floor."""
    fig, ax = plt.subplots(1, 1, figsize=(6, 4))
    for r in results:
        state = r.state
        found = [s.m for s in state.steps if s.status == 'witness']
        missed = [s.m for s in state.steps if s.status != 'witness']
        ax.scatter([r.I] * len(found), found, color='tab:blue', marker='o')
        ax.scatter([r.I] * len(missed), missed, color='tab:red', marker='x')
        ax.plot([r.I - 0.3, r.I + 0.3], [r.I * r.J] * 2, color='black', linewidth=1)
    ax.set_xlabel('I')
    ax.set_ylabel('m')
    ax.grid(True)

    out_file = f'{os.path.splitext(out_file)[0]}.{figure_format}'
    os.makedirs(os.path.dirname(os.path.abspath(out_file)), exist_ok=True)
    fig.savefig(out_file, bbox_inches='tight')
    plt.close(fig)
    return out_file
