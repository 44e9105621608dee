import csv

import pytest
from hypothesis import given, strategies as st

from counterspeech.corpus import (
    CorpusError,
    GenderCategory,
    Label,
    LabeledCorpus,
    LabeledExample,
    Tweet,
    load_labeled_dataset,
    load_name_table,
    load_roster,
    predict_gender,
    save_roster,
    split_train_test,
)

ROSTER_HEADER = "handle,display_name,first_name,gender_declared,party,tracked\n"


def write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


class TestRoster:
    def test_header_only_gives_empty_roster(self, tmp_path):
        p = write(tmp_path / "r.csv", ROSTER_HEADER)
        assert load_roster(p) == []

    def test_declared_gender_overrides_predicted(self, tmp_path):
        p = write(tmp_path / "r.csv", ROSTER_HEADER + "janedoe,Jane Doe,John,female,IND,true\n")
        (candidate,) = load_roster(p)
        assert candidate.gender_predicted is GenderCategory.MALE
        assert candidate.effective_gender is GenderCategory.FEMALE

    def test_predicted_used_when_no_declaration(self, tmp_path):
        p = write(tmp_path / "r.csv", ROSTER_HEADER + "rdoe,Rachel Doe,Rachel,,NDP,true\n")
        (candidate,) = load_roster(p)
        assert candidate.effective_gender is GenderCategory.FEMALE

    def test_duplicate_handle_rejected_by_name(self, tmp_path):
        rows = "janedoe,A,Jane,,X,true\njanedoe,B,Joan,,Y,false\n"
        p = write(tmp_path / "r.csv", ROSTER_HEADER + rows)
        with pytest.raises(CorpusError, match="janedoe"):
            load_roster(p)

    def test_missing_column_rejected_by_name(self, tmp_path):
        p = write(tmp_path / "r.csv", "handle,display_name,first_name,party,tracked\n")
        with pytest.raises(CorpusError, match="gender_declared"):
            load_roster(p)

    def test_roundtrip_identity(self, tmp_path):
        p = write(
            tmp_path / "r.csv",
            ROSTER_HEADER
            + "janedoe,Jane Doe,Jane,female,NDP,true\n"
            + "jsmith,Jo Smith,Jo,,UCP,false\n",
        )
        roster = load_roster(p)
        out = tmp_path / "out.csv"
        save_roster(roster, out)
        assert load_roster(out) == roster


class TestPredictGender:
    table = load_name_table()

    def test_present_name(self):
        assert predict_gender("rachel", self.table) is GenderCategory.FEMALE

    def test_absent_name_is_unknown(self):
        assert predict_gender("zzyzx", self.table) is GenderCategory.UNKNOWN

    def test_case_insensitive(self):
        assert predict_gender("RACHEL", self.table) == predict_gender("Rachel", self.table)

    @given(st.text(max_size=20))
    def test_lowercase_invariant(self, name):
        assert predict_gender(name, self.table) == predict_gender(name.lower(), self.table)


def dataset_csv(tmp_path, rows):
    path = tmp_path / "d.csv"
    with open(path, "w", newline="", encoding="utf-8") as f:
        w = csv.writer(f)
        w.writerow(["id", "text", "label"])
        w.writerows(rows)
    return path


class TestLabeledDataset:
    def test_class_balance(self, tmp_path):
        p = dataset_csv(tmp_path, [
            ("1", "you are awful", "hateful"),
            ("2", "nice work", "not_hateful"),
            ("3", "good luck", "not_hateful"),
            ("4", "well done", "not_hateful"),
        ])
        corpus = load_labeled_dataset(p)
        assert len(corpus) == 4
        assert corpus.class_balance == 0.25

    def test_duplicate_clean_texts_collapse(self, tmp_path):
        p = dataset_csv(tmp_path, [
            ("1", "@a Hello THERE", "not_hateful"),
            ("2", "@b hello  there", "not_hateful"),
        ])
        corpus = load_labeled_dataset(p)
        assert len(corpus) == 1
        assert corpus.examples[0].id == "1"
        assert corpus.examples[0].clean_text == "MENTION hello there"

    def test_unknown_label_names_row(self, tmp_path):
        p = dataset_csv(tmp_path, [
            ("1", "fine", "not_hateful"),
            ("2", "bad", "abusive"),
        ])
        with pytest.raises(CorpusError, match="row 3"):
            load_labeled_dataset(p)


def make_corpus(n_hateful, n_not):
    examples = [
        LabeledExample(str(i), f"h{i}", f"h{i}", Label.HATEFUL) for i in range(n_hateful)
    ] + [
        LabeledExample(f"n{i}", f"t{i}", f"t{i}", Label.NOT_HATEFUL) for i in range(n_not)
    ]
    return LabeledCorpus(examples)


class TestSplit:
    def test_exact_stratification(self):
        corpus = make_corpus(5, 15)
        train, test = split_train_test(corpus, 0.8, seed=0)
        assert len(train) == 16 and len(test) == 4
        assert sum(1 for e in train.examples if e.label is Label.HATEFUL) == 4
        assert sum(1 for e in test.examples if e.label is Label.HATEFUL) == 1

    def test_same_seed_identical(self):
        corpus = make_corpus(7, 23)
        a = split_train_test(corpus, 0.7, seed=42)
        b = split_train_test(corpus, 0.7, seed=42)
        assert a[0].examples == b[0].examples and a[1].examples == b[1].examples

    def test_reference_scale_counts(self):
        # 20194 examples at the documented 25.4% balance (5130 hateful)
        corpus = make_corpus(5130, 15064)
        train, test = split_train_test(corpus, 0.8, seed=1)
        assert len(train) == 16155
        assert len(test) == 4039

    def test_single_class_rejected(self):
        with pytest.raises(CorpusError, match="zero members"):
            split_train_test(make_corpus(5, 0), 0.8, seed=0)

    @given(
        n_hateful=st.integers(1, 60),
        n_not=st.integers(1, 60),
        fraction=st.floats(0.05, 0.95),
        seed=st.integers(0, 2**31),
    )
    def test_partition_properties(self, n_hateful, n_not, fraction, seed):
        corpus = make_corpus(n_hateful, n_not)
        train, test = split_train_test(corpus, fraction, seed)
        train_ids = {e.id for e in train.examples}
        test_ids = {e.id for e in test.examples}
        assert train_ids.isdisjoint(test_ids)
        assert len(train) + len(test) == len(corpus)
        if len(train):
            assert abs(train.class_balance - corpus.class_balance) <= 1 / len(train) + 1e-12


class TestTweet:
    def test_mentions_deduplicated(self):
        t = Tweet("1", "x", "en", "a", ("b", "c", "b"), False, __import__("datetime").datetime.now(__import__("datetime").timezone.utc))
        assert t.mentioned_handles == ("b", "c")

    def test_json_roundtrip(self):
        t = Tweet.from_dict({
            "id": "9", "text": "hi", "lang": "en", "author_handle": "me",
            "mentioned_handles": ["you"], "is_retweet": False,
            "timestamp": "2019-04-01T12:00:00Z",
        })
        assert Tweet.from_dict(t.to_dict()) == t

    def test_empty_id_rejected(self):
        with pytest.raises(CorpusError):
            Tweet.from_dict({
                "id": "", "text": "hi", "lang": "en", "author_handle": "me",
                "mentioned_handles": [], "is_retweet": False,
                "timestamp": "2019-04-01T12:00:00Z",
            })
