from collections import Counter

import numpy as np
import pytest

from boostlab import DataError, PreprocessConfig, SplitSpec, load_csv, train_test_split
from boostlab._prng import XorShift64Star
from conftest import make_dataset


def write(tmp_path, text, name="data.csv"):
    path = tmp_path / name
    path.write_text(text)
    return path


class TestLoadCsv:
    def test_lexicographic_label_encoding(self, tmp_path):
        path = write(tmp_path, "x,label\n1,B\n2,A\n3,A\n")
        data = load_csv(path, PreprocessConfig(label_column="label", drop_duplicates=False))
        assert data.labels.tolist() == [1, 0, 0]
        assert data.class_names == ("A", "B")

    def test_mean_imputation(self, tmp_path):
        path = write(tmp_path, "x,y\n2.0,a\n,b\n4.0,a\n")
        data = load_csv(path, PreprocessConfig(label_column="y"))
        assert data.features[:, 0].tolist() == [2.0, 3.0, 4.0]

    def test_median_imputation_and_missing_tokens(self, tmp_path):
        path = write(tmp_path, "x,y\n1,a\nNA,b\n2,a\n?,b\n10,a\n")
        data = load_csv(path, PreprocessConfig(label_column="y", impute_numeric="median"))
        assert data.features[:, 0].tolist() == [1.0, 2.0, 2.0, 2.0, 10.0]

    def test_duplicates_removed(self, tmp_path):
        text = "x,y\n1,a\n2,b\n1,a\n"
        on = load_csv(write(tmp_path, text), PreprocessConfig(label_column="y"))
        off = load_csv(write(tmp_path, text), PreprocessConfig(label_column="y", drop_duplicates=False))
        assert off.n_samples - on.n_samples == 1

    def test_duplicates_compared_before_imputation(self, tmp_path):
        # the missing cell would impute to 1.0, but the raw rows differ
        path = write(tmp_path, "x,y\n1,a\n,a\n1,a\n2,b\n")
        data = load_csv(path, PreprocessConfig(label_column="y"))
        assert data.n_samples == 3

    def test_categorical_features_first_appearance(self, tmp_path):
        path = write(tmp_path, "color,size,y\nred,1,a\nblue,2,b\nred,3,a\n,4,b\n")
        data = load_csv(path, PreprocessConfig(label_column="y"))
        # missing color takes the mode ("red" -> 0)
        assert data.features[:, 0].tolist() == [0.0, 1.0, 0.0, 0.0]
        assert data.feature_names == ("color", "size")

    def test_label_column_by_index_and_drop_columns(self, tmp_path):
        path = write(tmp_path, "id,x,y\n1,0.5,a\n2,0.7,b\n")
        data = load_csv(path, PreprocessConfig(label_column=2, drop_columns=("id",)))
        assert data.feature_names == ("x",)

    def test_rows_with_missing_label_dropped(self, tmp_path):
        path = write(tmp_path, "x,y\n1,a\n2,\n3,b\n")
        assert load_csv(path, PreprocessConfig(label_column="y")).n_samples == 2

    def test_clean_data_is_unchanged(self, tmp_path):
        path = write(tmp_path, "x,z,y\n1.5,-2,a\n2.5,7,b\n3.25,0,a\n")
        data = load_csv(path, PreprocessConfig(label_column="y"))
        np.testing.assert_array_equal(data.features, [[1.5, -2], [2.5, 7], [3.25, 0]])

    @pytest.mark.parametrize(
        "text, match",
        [
            ("x,y\n1,a\n2\n", "expected 2 columns"),
            ("x,y\n1,\n2,NA\n", "entirely missing"),
            ("x,y\n1,a\n2,a\n", "at least 2 classes"),
            ("x,y\n", "no data rows"),
        ],
    )
    def test_errors(self, tmp_path, text, match):
        with pytest.raises(DataError, match=match):
            load_csv(write(tmp_path, text), PreprocessConfig(label_column="y"))

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError, match="no such file"):
            load_csv(tmp_path / "nope.csv")

    def test_unknown_label_column(self, tmp_path):
        with pytest.raises(DataError, match="exactly one header"):
            load_csv(write(tmp_path, "x,y\n1,a\n2,b\n"), PreprocessConfig(label_column="class"))


class TestDatasetInvariants:
    def test_rejects_nan(self):
        with pytest.raises(DataError):
            make_dataset([[np.nan], [1.0]], [0, 1])

    def test_rejects_out_of_range_labels(self):
        with pytest.raises(DataError):
            make_dataset([[0.0], [1.0]], [0, 2], n_classes=2)

    def test_arrays_are_read_only(self):
        data = make_dataset([[0.0], [1.0]], [0, 1])
        with pytest.raises(ValueError):
            data.features[0, 0] = 5.0


class TestSplit:
    def test_sizes(self):
        data = make_dataset(np.arange(10.0), [0, 1] * 5)
        train, test = train_test_split(data, SplitSpec(0.3, seed=7))
        assert (train.n_samples, test.n_samples) == (7, 3)

    def test_deterministic(self):
        data = make_dataset(np.arange(50.0), [0, 1] * 25)
        a = train_test_split(data, SplitSpec(0.3, seed=123))
        b = train_test_split(data, SplitSpec(0.3, seed=123))
        np.testing.assert_array_equal(a[1].features, b[1].features)
        c = train_test_split(data, SplitSpec(0.3, seed=124))
        assert not np.array_equal(a[1].features, c[1].features)

    def test_partition(self):
        data = make_dataset(np.arange(31.0), [0, 1, 2] * 10 + [0])
        train, test = train_test_split(data, SplitSpec(0.25, seed=1))
        combined = sorted(np.concatenate([train.features[:, 0], test.features[:, 0]]).tolist())
        assert combined == list(range(31))
        assert Counter(train.labels.tolist()) + Counter(test.labels.tolist()) == Counter(data.labels.tolist())

    def test_stratified_counts(self):
        data = make_dataset(np.arange(10.0), [0] * 6 + [1] * 4)
        _, test = train_test_split(data, SplitSpec(0.5, seed=3, stratified=True))
        assert Counter(test.labels.tolist()) == {0: 3, 1: 2}

    def test_stratified_needs_two_per_class(self):
        data = make_dataset(np.arange(5.0), [0, 0, 0, 0, 1])
        with pytest.raises(DataError, match=">= 2 members"):
            train_test_split(data, SplitSpec(0.4, stratified=True))

    def test_empty_part_rejected(self):
        data = make_dataset(np.arange(4.0), [0, 1, 0, 1])
        with pytest.raises(DataError, match="empty part"):
            train_test_split(data, SplitSpec(0.1))

    def test_half_rounds_up(self):
        data = make_dataset(np.arange(5.0), [0, 1, 0, 1, 0])
        _, test = train_test_split(data, SplitSpec(0.5))
        assert test.n_samples == 3


class TestPrng:
    def test_known_sequence(self):
        # xorshift64* after one splitmix64 step, evaluated by hand-written big-int arithmetic
        mask = (1 << 64) - 1
        z = (0 + 0x9E3779B97F4A7C15) & mask
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
        x = z ^ (z >> 31)
        x ^= x >> 12
        x ^= (x << 25) & mask
        x ^= x >> 27
        assert XorShift64Star(0).next_u64() == (x * 0x2545F4914F6CDD1D) & mask

    def test_below_is_roughly_uniform(self):
        rng = XorShift64Star(99)
        counts = Counter(rng.below(5) for _ in range(5000))
        assert set(counts) == set(range(5))
        assert all(850 < c < 1150 for c in counts.values())

    def test_permutation(self):
        assert sorted(XorShift64Star(5).permutation(20)) == list(range(20))
