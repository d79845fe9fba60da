import numpy as np
import pytest

from mdlrank import (
    DegenerateInputError,
    center_columns,
    DomainError,
    ParseError,
    PriceTable,
    SyntheticSpec,
    frobenius_sq,
    generate_lin,
    generator_metadata,
    load_csv,
    load_matrix_csv,
    returns_transform,
    standardize_columns,
    svd,
    tail_energy,
)


def _table(columns):
    prices = np.array(columns, dtype=np.float64).T
    names = tuple(f"c{j}" for j in range(prices.shape[1]))
    return PriceTable(column_names=names, prices=prices)


class TestReturnsTransform:
    def test_direct_formula(self):
        r = returns_transform(_table([[100.0, 110.0, 99.0]]))
        np.testing.assert_allclose(r[:, 0], [10.0, -10.0])

    def test_constant_prices_give_zero_returns(self):
        r = returns_transform(_table([[50.0, 50.0, 50.0]]))
        np.testing.assert_allclose(r[:, 0], [0.0, 0.0])

    def test_doubling_is_plus_hundred(self):
        for c in (0.01, 1.0, 123.4):
            r = returns_transform(_table([[c, 2.0 * c]]))
            np.testing.assert_allclose(r[:, 0], [100.0])

    def test_roundtrip_reconstructs_prices(self):
        rng = np.random.default_rng(60)
        prices = np.exp(rng.normal(0.0, 0.02, (40, 6)).cumsum(axis=0)) * 50.0
        table = PriceTable(tuple("abcdef"), prices)
        r = returns_transform(table)
        rebuilt = np.empty_like(prices)
        rebuilt[0] = prices[0]
        for i in range(r.shape[0]):
            rebuilt[i + 1] = rebuilt[i] * (1.0 + r[i] / 100.0)
        np.testing.assert_allclose(rebuilt, prices, rtol=1e-9)

    def test_nonpositive_prices_rejected_at_construction(self):
        with pytest.raises(DomainError):
            _table([[100.0, -1.0, 99.0]])
        with pytest.raises(DomainError):
            _table([[100.0, 0.0, 99.0]])

    def test_single_row_rejected(self):
        with pytest.raises(DegenerateInputError):
            PriceTable(("a",), np.array([[100.0]]))


class TestGenerateLin:
    def test_zero_noise_is_exactly_low_rank(self):
        spec = SyntheticSpec(n=40, m=8, true_k=3, noise_sigma=0.0, seed=5)
        x = generate_lin(spec)
        sv = svd(x).singular_values
        assert np.all(sv[3:] <= 1e-9 * sv[0])
        assert tail_energy(svd(x), 3) <= 1e-16 * frobenius_sq(x)

    def test_identical_seed_bit_identical(self):
        spec = SyntheticSpec(n=500, m=30, true_k=10, noise_sigma=0.1, seed=7)
        a, b = generate_lin(spec), generate_lin(spec)
        assert np.array_equal(a, b)

    def test_different_seed_differs(self):
        a = generate_lin(SyntheticSpec(n=20, m=5, true_k=2, seed=1))
        b = generate_lin(SyntheticSpec(n=20, m=5, true_k=2, seed=2))
        assert not np.array_equal(a, b)

    def test_spectral_gap_with_shipped_defaults(self):
        spec = SyntheticSpec(n=500, m=30, true_k=5, noise_sigma=0.1, seed=7)
        sv = svd(generate_lin(spec)).singular_values
        assert np.all(sv[5:] * 5.0 < sv[4])

    def test_base_columns_pass_through(self):
        base = np.arange(12.0).reshape(6, 2)
        spec = SyntheticSpec(n=6, m=4, true_k=2, noise_sigma=0.0, seed=3)
        x = generate_lin(spec, base=base)
        np.testing.assert_array_equal(x[:, :2], base)
        assert np.linalg.matrix_rank(x) <= 2

    def test_base_shape_checked(self):
        spec = SyntheticSpec(n=6, m=4, true_k=2, seed=3)
        with pytest.raises(DomainError):
            generate_lin(spec, base=np.ones((5, 2)))

    def test_spec_validation(self):
        with pytest.raises(DomainError):
            SyntheticSpec(n=10, m=4, true_k=5)
        with pytest.raises(DomainError):
            SyntheticSpec(n=10, m=4, true_k=2, noise_sigma=-0.1)
        with pytest.raises(DomainError):
            SyntheticSpec(n=10, m=4, true_k=2, mix_low=1.0, mix_high=-1.0)

    def test_metadata_records_generator_identity(self):
        spec = SyntheticSpec(n=10, m=4, true_k=2, seed=9)
        meta = generator_metadata(spec)
        assert meta["generator"] == "numpy.random.Generator(PCG64)"
        assert meta["numpy_version"] == np.__version__
        assert meta["seed"] == 9
        assert "standard deviation" in meta["noise_note"]


class TestStandardizeColumns:
    def test_small_example(self):
        z = standardize_columns(np.array([[1.0], [2.0], [3.0]]))
        np.testing.assert_allclose(z[:, 0], [-1.0, 0.0, 1.0])

    def test_idempotent(self):
        rng = np.random.default_rng(61)
        x = rng.normal(5.0, 3.0, (30, 4))
        once = standardize_columns(x)
        twice = standardize_columns(once)
        np.testing.assert_allclose(twice, once, atol=1e-12)

    def test_correlation_diagonal_is_unit(self):
        rng = np.random.default_rng(62)
        z = standardize_columns(rng.standard_normal((100, 5)) * [1, 10, 0.1, 3, 7])
        corr = z.T @ z / (z.shape[0] - 1)
        np.testing.assert_allclose(np.diag(corr), 1.0, atol=1e-9)

    def test_constant_column_named(self):
        x = np.ones((5, 3))
        x[:, 0] = np.arange(5)
        x[:, 2] = np.arange(5) ** 2
        with pytest.raises(DegenerateInputError, match="column 2"):
            standardize_columns(x)


class TestLoadCsv:
    def test_well_formed(self, tmp_path):
        p = tmp_path / "prices.csv"
        p.write_text("a,b\n1.0,2.0\n1.5,2.5\n2.0,3.0\n")
        table = load_csv(p)
        assert table.column_names == ("a", "b")
        assert table.prices.shape == (3, 2)

    def test_headerless_names_synthesized(self, tmp_path):
        p = tmp_path / "prices.csv"
        p.write_text("1.0,2.0\n1.5,2.5\n")
        table = load_csv(p, has_header=False)
        assert table.column_names == ("col_1", "col_2")

    def test_non_numeric_cell_cites_coordinates(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("1.0,2.0\nabc,2.5\n3.0,3.5\n")
        with pytest.raises(ParseError, match=r"row 2, column 1"):
            load_csv(p, has_header=False)

    def test_header_only_file_rejected(self, tmp_path):
        p = tmp_path / "empty.csv"
        p.write_text("a,b\n")
        with pytest.raises(DegenerateInputError, match="2"):
            load_csv(p)

    def test_ragged_row_cites_row(self, tmp_path):
        p = tmp_path / "ragged.csv"
        p.write_text("a,b\n1.0,2.0\n1.5\n")
        with pytest.raises(ParseError, match="row 3"):
            load_csv(p)

    def test_nonpositive_price_cites_coordinates(self, tmp_path):
        p = tmp_path / "neg.csv"
        p.write_text("a,b\n1.0,2.0\n1.5,-2.5\n")
        with pytest.raises(ParseError, match=r"row 3, column 2"):
            load_csv(p)

    def test_non_finite_token_rejected(self, tmp_path):
        p = tmp_path / "inf.csv"
        p.write_text("1.0,2.0\ninf,2.5\n")
        with pytest.raises(ParseError, match="row 2, column 1"):
            load_csv(p, has_header=False)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ParseError):
            load_csv(tmp_path / "nope.csv")


class TestLoadMatrixCsv:
    def test_signed_entries_allowed(self, tmp_path):
        p = tmp_path / "m.csv"
        p.write_text("x,y\n-1.0,0.0\n2.0,-3.0\n")
        names, matrix = load_matrix_csv(p)
        assert names == ("x", "y")
        np.testing.assert_allclose(matrix, [[-1.0, 0.0], [2.0, -3.0]])

    def test_empty_data_rejected(self, tmp_path):
        p = tmp_path / "m.csv"
        p.write_text("x,y\n")
        with pytest.raises(DegenerateInputError):
            load_matrix_csv(p)


class TestCenterColumns:
    def test_columns_become_mean_zero(self):
        rng = np.random.default_rng(63)
        x = rng.normal(7.0, 2.0, (25, 3))
        centered = center_columns(x)
        np.testing.assert_allclose(centered.mean(axis=0), 0.0, atol=1e-12)
        np.testing.assert_allclose(centered + x.mean(axis=0), x, atol=1e-12)

    def test_scaling_untouched(self):
        x = np.array([[1.0, 10.0], [3.0, 30.0]])
        centered = center_columns(x)
        np.testing.assert_allclose(centered, [[-1.0, -10.0], [1.0, 10.0]])
