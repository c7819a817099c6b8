"""
Test suite for per-year co-occurrence networks (conetwork.py module).
"""

import io
from collections import Counter

import numpy as np
import pytest

from cinenet.conetwork import (
    CountryList,
    YearNetwork,
    build_all_years,
    build_year_network,
    country_totals,
    filter_country_list,
    read_matrix_dump,
    write_dense_export,
    write_matrix_dump,
    write_totals,
)
from cinenet.errors import ArgumentError, FormatError
from cinenet.ingest import MovieRecord

from conftest import FIXTURE_COUNTRIES, FIXTURE_PATTERNS, FIXTURE_YEARS, expected_counts

CODES = tuple(f"K{i}" for i in range(8))


def movie(movie_id, year, *regions):
    return MovieRecord(movie_id, year, frozenset(regions))


def random_corpus(rng, year=2000):
    records = []
    for n in range(int(rng.integers(0, 51))):
        k = int(rng.integers(1, len(CODES) + 1))
        picked = rng.choice(len(CODES), size=k, replace=False)
        records.append(MovieRecord(f"r{n}", year, frozenset(CODES[i] for i in picked)))
    return records


def brute_force_matrix(records, order):
    index = {code: i for i, code in enumerate(order)}
    matrix = np.zeros((len(order), len(order)), dtype=np.int64)
    for record in records:
        for a in record.regions:
            for b in record.regions:
                matrix[index[a], index[b]] += 1
    return matrix


class TestBuildYearNetwork:
    """Test counting one year of movies."""

    def test_single_pair_movie(self):
        """Test that one {US, FR} movie gives ones on both diagonals and the edge."""
        net = build_year_network([movie("m1", 1990, "US", "FR")], 1990)
        assert net.count("US", "US") == 1
        assert net.count("FR", "FR") == 1
        assert net.count("US", "FR") == 1
        assert net.count("FR", "US") == 1

    def test_two_movies(self):
        """Test {US, FR} plus {US} gives US diagonal 2."""
        net = build_year_network([movie("m1", 1990, "US", "FR"), movie("m2", 1990, "US")], 1990)
        assert net.diagonal == {"US": 2, "FR": 1}
        assert net.pairs == {("FR", "US"): 1}

    def test_single_region_movie_has_no_edge(self):
        """Test that a one-region movie only touches the diagonal."""
        net = build_year_network([movie("m1", 1990, "JP")], 1990)
        assert net.diagonal == {"JP": 1}
        assert net.pairs == {}

    def test_other_years_ignored(self):
        """Test that movies of other years do not count."""
        net = build_year_network([movie("m1", 1991, "JP")], 1990)
        assert net.is_empty()

    def test_matches_brute_force(self):
        """Test the sparse build against a dense double loop on random corpora."""
        rng = np.random.default_rng(11)
        for _ in range(1000):
            records = random_corpus(rng)
            net = build_year_network(records, 2000)
            assert np.array_equal(net.to_dense(CODES), brute_force_matrix(records, CODES))

    def test_symmetric_and_bounded(self):
        """Test symmetry and that an edge never exceeds either diagonal."""
        rng = np.random.default_rng(12)
        for _ in range(200):
            dense = build_year_network(random_corpus(rng), 2000).to_dense(CODES)
            assert np.array_equal(dense, dense.T)
            diagonal = np.diag(dense)
            assert (dense <= np.minimum.outer(diagonal, diagonal)).all()

    def test_pair_conservation(self):
        """Test that summed off-diagonal counts equal the sum of k (k - 1)."""
        rng = np.random.default_rng(13)
        for _ in range(200):
            records = random_corpus(rng)
            dense = build_year_network(records, 2000).to_dense(CODES)
            off_diagonal = dense.sum() - np.trace(dense)
            assert off_diagonal == sum(len(r.regions) * (len(r.regions) - 1) for r in records)

    def test_order_invariance(self):
        """Test that shuffling movies does not change the network."""
        rng = np.random.default_rng(14)
        for _ in range(100):
            records = random_corpus(rng)
            shuffled = [records[i] for i in rng.permutation(len(records))]
            assert build_year_network(records, 2000) == build_year_network(shuffled, 2000)

    def test_additivity(self):
        """Test that the network of a union is the sum of the parts."""
        rng = np.random.default_rng(15)
        for _ in range(100):
            first = random_corpus(rng)
            second = [MovieRecord(f"s{r.movie_id}", r.year, r.regions) for r in random_corpus(rng)]
            whole = build_year_network(first + second, 2000)
            parts = [build_year_network(first, 2000), build_year_network(second, 2000)]
            assert Counter(whole.diagonal) == sum((Counter(p.diagonal) for p in parts), Counter())
            assert Counter(whole.pairs) == sum((Counter(p.pairs) for p in parts), Counter())

    def test_fixture_counts(self, corpus_records):
        """Test every fixture year against counts derived from the pattern table."""
        for year in FIXTURE_YEARS:
            net = build_year_network(corpus_records, year)
            expected = expected_counts(year)
            for a in FIXTURE_COUNTRIES:
                for b in FIXTURE_COUNTRIES:
                    assert net.count(a, b) == expected[(a, b)], (year, a, b)


class TestYearNetwork:
    """Test the network value type."""

    def test_unordered_pair_rejected(self):
        """Test that pair keys must be lexicographically ordered."""
        with pytest.raises(ArgumentError):
            YearNetwork(1990, {"FR": 1, "US": 1}, {("US", "FR"): 1})

    def test_edge_above_diagonal_rejected(self):
        """Test that an edge larger than a diagonal entry is refused."""
        with pytest.raises(ArgumentError):
            YearNetwork(1990, {"FR": 1, "US": 3}, {("FR", "US"): 2})

    def test_dense_uses_given_order(self):
        """Test that the dense view follows the order and drops countries outside it."""
        net = build_year_network([movie("m1", 1990, "US", "FR", "JP")], 1990)
        assert net.to_dense(("US", "FR")).tolist() == [[1, 1], [1, 1]]
        assert net.to_dense(("CN",)).tolist() == [[0]]


class TestBuildAllYears:
    """Test the per-year sequence."""

    def test_singleton_range(self):
        """Test that a one-year window gives exactly one network."""
        networks = build_all_years([movie("m1", 1990, "US")], 1990, 1990)
        assert [net.year for net in networks] == [1990]

    def test_gap_year_is_empty(self):
        """Test that a year without movies yields an empty network, not a missing one."""
        records = [movie("m1", 1982, "US"), movie("m2", 1984, "US", "FR")]
        networks = build_all_years(records, 1982, 1984)
        assert [net.year for net in networks] == [1982, 1983, 1984]
        assert networks[1].is_empty()

    def test_inverted_range(self):
        """Test that from > to is an argument error."""
        with pytest.raises(ArgumentError):
            build_all_years([], 1990, 1980)

    def test_out_of_window_movies_ignored(self):
        """Test that movies outside the window contribute nothing."""
        networks = build_all_years([movie("m1", 1979, "US")], 1980, 1981)
        assert all(net.is_empty() for net in networks)


class TestCountryList:
    """Test totals and the threshold filter."""

    def test_filter_example(self):
        """Test totals US 5000, FR 2000, TV 3 with threshold 1000."""
        country_list = filter_country_list({"US": 5000, "FR": 2000, "TV": 3}, 1000)
        assert country_list.members == ("US", "FR")

    def test_threshold_is_strict(self):
        """Test that a total equal to the threshold is excluded."""
        assert filter_country_list({"US": 1000, "FR": 1001}, 1000).members == ("FR",)

    def test_ties_ordered_by_code(self):
        """Test descending totals with ties broken by code."""
        country_list = filter_country_list({"JP": 5, "FR": 5, "US": 9}, 0)
        assert country_list.members == ("US", "FR", "JP")

    def test_negative_threshold(self):
        """Test that a negative threshold is refused."""
        with pytest.raises(ArgumentError):
            filter_country_list({}, -1)

    def test_totals_over_fixture(self, corpus_records):
        """Test totals against the pattern table."""
        networks = build_all_years(corpus_records, FIXTURE_YEARS[0], FIXTURE_YEARS[-1])
        expected = {
            code: sum(sum(n) for pattern, n in FIXTURE_PATTERNS.items() if code in pattern)
            for code in FIXTURE_COUNTRIES
        }
        assert country_totals(networks) == expected

    def test_zero_threshold_keeps_everyone(self, corpus_records):
        """Test that threshold 0 keeps every observed country."""
        networks = build_all_years(corpus_records, FIXTURE_YEARS[0], FIXTURE_YEARS[-1])
        country_list = filter_country_list(country_totals(networks), 0)
        assert set(country_list.members) == set(FIXTURE_COUNTRIES)

    def test_json_roundtrip(self):
        """Test that a country list survives its JSON form."""
        country_list = filter_country_list({"US": 50, "FR": 20, "TV": 3}, 10)
        assert CountryList.from_json(country_list.to_json()) == country_list


class TestMatrixDump:
    """Test the CSV form of the networks."""

    def test_dump_layout(self):
        """Test the exact text of a small dump."""
        networks = build_all_years([movie("m1", 1990, "US", "FR")], 1990, 1990)
        buffer = io.StringIO()
        write_matrix_dump(networks, buffer)
        assert buffer.getvalue() == (
            "year,country_a,country_b,count\n"
            "1990,FR,FR,1\n"
            "1990,FR,US,1\n"
            "1990,US,US,1\n"
        )

    def test_roundtrip_with_gap_year(self):
        """Test that a dump with an empty middle year reads back identically."""
        records = [movie("m1", 1982, "US", "FR"), movie("m2", 1984, "US", "JP", "FR")]
        networks = build_all_years(records, 1982, 1984)
        buffer = io.StringIO()
        write_matrix_dump(networks, buffer)
        buffer.seek(0)
        assert read_matrix_dump(buffer, 1982, 1984) == networks

    def test_fixture_roundtrip(self, corpus_records):
        """Test the fixture networks survive a dump."""
        networks = build_all_years(corpus_records, FIXTURE_YEARS[0], FIXTURE_YEARS[-1])
        buffer = io.StringIO()
        write_matrix_dump(networks, buffer)
        buffer.seek(0)
        assert read_matrix_dump(buffer, FIXTURE_YEARS[0], FIXTURE_YEARS[-1]) == networks

    def test_bad_header(self):
        """Test that a dump without the expected header is a format error."""
        with pytest.raises(FormatError):
            read_matrix_dump(io.StringIO("a,b,c,d\n"))

    def test_unordered_row(self):
        """Test that a pair row in the wrong order is a format error with its line."""
        with pytest.raises(FormatError) as info:
            read_matrix_dump(
                io.StringIO("year,country_a,country_b,count\n1990,US,US,1\n1990,US,FR,1\n")
            )
        assert info.value.line == 3

    def test_year_outside_window(self):
        """Test that rows outside the declared window are refused."""
        with pytest.raises(FormatError):
            read_matrix_dump(
                io.StringIO("year,country_a,country_b,count\n1979,US,US,1\n"), 1980, 1981
            )

    def test_totals_layout(self):
        """Test that totals are written largest first."""
        buffer = io.StringIO()
        write_totals({"FR": 2, "US": 5, "JP": 2}, buffer)
        assert buffer.getvalue() == "country,total\nUS,5\nFR,2\nJP,2\n"

    def test_every_pair_written_once(self):
        """Test that each unordered pair appears in one row per year."""
        rng = np.random.default_rng(17)
        networks = [build_year_network(random_corpus(rng, 2000), 2000)]
        buffer = io.StringIO()
        write_matrix_dump(networks, buffer)
        rows = buffer.getvalue().splitlines()[1:]
        keys = [tuple(row.split(",")[1:3]) for row in rows]
        assert len(keys) == len(set(keys))
        assert all(a <= b for a, b in keys)
        expected = len(networks[0].diagonal) + len(networks[0].pairs)
        assert len(rows) == expected

    def test_dense_export_gap_year(self, tmp_path):
        """Test that the npz export keeps an empty middle year as a zero matrix."""
        records = [movie("m1", 1982, "US", "FR"), movie("m2", 1984, "US", "JP", "FR")]
        networks = build_all_years(records, 1982, 1984)
        path = tmp_path / "matrices.npz"
        write_dense_export(networks, ("US", "FR", "JP"), path)
        with np.load(path) as archive:
            assert archive["years"].tolist() == [1982, 1983, 1984]
            assert archive["countries"].tolist() == ["US", "FR", "JP"]
            counts = archive["counts"]
        assert counts.shape == (3, 3, 3)
        assert counts[0].tolist() == [[1, 1, 0], [1, 1, 0], [0, 0, 0]]
        assert not counts[1].any()
        assert counts[2].tolist() == [[1, 1, 1], [1, 1, 1], [1, 1, 1]]
