import os

from dgr.search_pkg.seeded import bound_descent
from dgr.visualization import occupancy_array, plot_dgr, plot_descent


def test_occupancy(small_dgr):
    array = occupancy_array(small_dgr)
    assert array.shape == (2, 6)
    assert list(array[0]) == [1, 1, 0, 1, 0, 0]
    assert list(array[1]) == [0, 0, 2, 0, 2, 2]


def test_plots(small_dgr, config, tmp_path):
    out = plot_dgr(small_dgr, tmp_path / 'figures' / 'small.dgr')
    assert out.endswith('small.png')
    assert os.path.isfile(out)

    results = [bound_descent([small_dgr], config)]
    out = plot_descent(results, str(tmp_path / 'descent'), figure_format='svg')
    assert os.path.isfile(out)
