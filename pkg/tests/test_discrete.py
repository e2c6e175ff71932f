import json

import numpy as np
import pytest

from codecomp.codes import bch, bit_of_messages, from_table, repetition, stochastic_code_matrix
from codecomp.discrete import (
    ChannelSpecError,
    DegenerateDichotomy,
    Dichotomy,
    Prior,
    TransferMatrix,
    bsc,
    build_channel,
    build_prior,
    dichotomy_csv,
    equivalent_bit_dichotomy,
    likelihood_row,
    load_channel_file,
    transfer_matrix,
)
from codecomp.errors import GuardExceeded


def test_bsc_examples():
    assert bsc(0).matrix.tolist() == [[1, 0], [0, 1]]
    assert np.all(bsc(0.5).matrix == 0.5)
    assert bsc(0.1).matrix.tolist() == [[0.9, 0.1], [0.1, 0.9]]
    with pytest.raises(ChannelSpecError):
        bsc(1.5)


def test_likelihood_row_product():
    row = likelihood_row([0, 0, 0], bsc(0.1))
    assert row[0] == pytest.approx(0.729, abs=1e-15)
    assert row[7] == pytest.approx(0.001, abs=1e-15)
    assert row.sum() == pytest.approx(1.0, abs=1e-15)
    assert likelihood_row([1, 0, 1], bsc(0)).tolist() == [0, 0, 0, 0, 0, 1, 0, 0]


def test_likelihood_row_index_order():
    # first symbol most significant: z = 100 is index 4
    row = likelihood_row([1, 1], build_channel({"type": "matrix", "rows": [[1, 0], [0.3, 0.7]]}))
    assert row.tolist() == pytest.approx([0.09, 0.21, 0.21, 0.49])


def test_transfer_matrix_rep3():
    T = transfer_matrix(repetition(3), bsc(0.1))
    assert T.rows.shape == (2, 8)
    assert T.rows[0, 0] == pytest.approx(0.729)
    assert T.rows[1, 7] == pytest.approx(0.729)


def test_transfer_matrix_matches_rowwise_likelihood():
    code = bch(4, 1)
    ch = bsc(0.07)
    T = transfer_matrix(from_table(code.table[:4]), ch)
    for i in range(4):
        assert np.allclose(T.rows[i], likelihood_row(code.table[i], ch), rtol=1e-13, atol=0)


def test_transfer_matrix_extremes():
    code = from_table([[0, 1, 1], [1, 0, 1]])
    T0 = transfer_matrix(code, bsc(0))
    assert T0.rows.tolist() == stochastic_code_matrix(code).dense().tolist()
    assert np.allclose(transfer_matrix(code, bsc(0.5)).rows, 1 / 8)


def test_transfer_matrix_stochastic_code_input():
    code = repetition(2)
    a = transfer_matrix(code, bsc(0.2)).rows
    b = transfer_matrix(stochastic_code_matrix(code), bsc(0.2)).rows
    assert np.array_equal(a, b)


def test_explicit_channel_with_memory():
    # burst channel on two symbols: flips both or neither
    full = np.zeros((4, 4))
    for x in range(4):
        full[x, x] = 0.8
        full[x, x ^ 0b11] = 0.2
    T = transfer_matrix(repetition(2), full)
    assert T.rows.tolist() == [[0.8, 0, 0, 0.2], [0.2, 0, 0, 0.8]]
    with pytest.raises(ValueError):
        transfer_matrix(repetition(2), np.eye(8))
    with pytest.raises(GuardExceeded):
        transfer_matrix(repetition(5), np.eye(32))


def test_transfer_guard():
    with pytest.raises(GuardExceeded):
        transfer_matrix(repetition(30), bsc(0.1))


def test_transfer_matrix_validates_rows():
    with pytest.raises(ValueError):
        TransferMatrix(np.array([[0.5, 0.4]]))


def test_channel_specs(tmp_path):
    assert build_channel("bsc:0.25").matrix[0, 1] == 0.25
    assert build_channel({"type": "bsc", "p": 0.3}).tag == "bsc(0.3)"
    with pytest.raises(ChannelSpecError):
        build_channel("awgn:1")
    with pytest.raises(ChannelSpecError):
        build_channel({"type": "matrix", "rows": [[0.5, 0.6], [0, 1]]})
    path = tmp_path / "ch.json"
    path.write_text(json.dumps({"type": "matrix", "name": "z", "rows": [[1, 0], [0.25, 0.75]]}))
    ch = load_channel_file(path)
    assert ch.tag == "z" and ch.matrix[1, 1] == 0.75


def test_prior_specs():
    assert np.allclose(build_prior(None, 2).p, 0.25)
    assert build_prior({"p": [0.1, 0.9]}, 1).p.tolist() == [0.1, 0.9]
    with pytest.raises(ValueError):
        build_prior([0.5, 0.5], 2)
    with pytest.raises(ValueError):
        Prior([0.5, 0.6])


def test_bit_of_messages_msb_first():
    assert bit_of_messages(2, 1).tolist() == [0, 0, 1, 1]
    assert bit_of_messages(2, 2).tolist() == [0, 1, 0, 1]


def test_dichotomy_k1_equals_transfer():
    T = transfer_matrix(repetition(3), bsc(0.1))
    D = equivalent_bit_dichotomy(T, Prior.uniform(1), 1)
    assert np.array_equal(D.rows, T.rows)
    assert D.row_masses == (0.5, 0.5) and D.bit_index == 1


def test_dichotomy_bch_15_7_shape():
    T = transfer_matrix(bch(4, 2), bsc(0.1))
    D = equivalent_bit_dichotomy(T, Prior.uniform(7), 1)
    assert D.rows.shape == (2, 1 << 15)
    assert np.allclose(D.rows.sum(axis=1), 1.0, atol=1e-12)


def test_dichotomy_degenerate_prior():
    T = transfer_matrix(from_table([[0, 0], [0, 1], [1, 0], [1, 1]]), bsc(0.1))
    prior = Prior([0.5, 0.5, 0.0, 0.0])  # all mass on b_1 = 0
    with pytest.raises(DegenerateDichotomy):
        equivalent_bit_dichotomy(T, prior, 1)
    equivalent_bit_dichotomy(T, prior, 2)  # the other bit is fine


def test_dichotomy_mass_consistency(rng):
    code = from_table(rng.permutation(8)[:4, None] >> np.arange(2, -1, -1) & 1)
    T = transfer_matrix(code, bsc(0.13))
    prior = Prior(rng.dirichlet(np.ones(4)))
    for r in (1, 2):
        D = equivalent_bit_dichotomy(T, prior, r)
        joint = D.unnormalized()
        assert np.allclose(joint.sum(axis=0), prior.p @ T.rows, atol=1e-15)
        bits = bit_of_messages(2, r)
        assert D.row_masses[1] == pytest.approx(prior.p[bits == 1].sum())


def test_dichotomy_from_raw():
    D = Dichotomy.from_raw([[1.0, 3.0], [2.0, 2.0]])
    assert D.rows.tolist() == [[0.25, 0.75], [0.5, 0.5]]
    assert D.row_masses == pytest.approx((0.5, 0.5))
    with pytest.raises(DegenerateDichotomy):
        Dichotomy.from_raw([[0.0, 0.0], [1.0, 0.0]])


def test_dichotomy_csv():
    D = Dichotomy([[0.25, 0.75], [0.5, 0.5]])
    assert dichotomy_csv(D) == "column_index,row0,row1\n0,0.25,0.5\n1,0.75,0.5\n"


def test_dichotomy_mass_consistency_bch_all_bits(rng):
    code = bch(4, 2)
    T = transfer_matrix(code, bsc(0.1))
    prior = Prior(rng.dirichlet(np.ones(code.M)))
    marginal = prior.p @ T.rows
    for r in range(1, code.k + 1):
        D = equivalent_bit_dichotomy(T, prior, r)
        assert np.allclose(D.unnormalized().sum(axis=0), marginal, rtol=1e-12, atol=1e-18)
