import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bloomclf.errors import EmptyVocabulary
from bloomclf.features import (
    FeatureConfig,
    fit_features,
    fit_vocabulary,
    transform,
    transform_metrics,
    transform_tfidf,
)
from bloomclf.textmetrics import compute_metrics, tokenize

TFIDF = FeatureConfig("tfidf")


def docs(*texts):
    return [tokenize(t) for t in texts]


def test_vocabulary_counts_and_order():
    v = fit_vocabulary(docs("a b", "b c"), TFIDF)
    assert v.terms == ("a", "b", "c")
    assert dict(zip(v.terms, v.document_frequency)) == {"a": 1, "b": 2, "c": 1}
    assert v.term_to_index == {"a": 0, "b": 1, "c": 2}
    assert v.document_count == 2


def test_vocabulary_min_df():
    v = fit_vocabulary(docs("a b", "b c"), FeatureConfig("tfidf", min_df=2))
    assert v.terms == ("b",)


def test_duplicate_token_counts_once_toward_df():
    v = fit_vocabulary(docs("a a a b", "b"), TFIDF)
    assert dict(zip(v.terms, v.document_frequency)) == {"a": 1, "b": 2}


def test_empty_vocabulary():
    with pytest.raises(EmptyVocabulary):
        fit_vocabulary(docs("a", "b"), FeatureConfig("tfidf", min_df=3))


def test_single_term_doc_is_unit_vector():
    v = fit_vocabulary(docs("a b", "b c"), TFIDF)
    row = transform_tfidf(tokenize("c c"), v, TFIDF).toarray()[0]
    np.testing.assert_array_equal(row, [0.0, 0.0, 1.0])


def test_all_oov_doc_is_zero():
    v = fit_vocabulary(docs("a b", "b c"), TFIDF)
    assert transform_tfidf(tokenize("zzz yyy"), v, TFIDF).nnz == 0


def test_idf_of_term_in_every_doc_is_one():
    v = fit_vocabulary(docs("a b", "b c"), TFIDF)
    assert v.idf()[v.term_to_index["b"]] == pytest.approx(math.log(3 / 3) + 1.0, abs=1e-15)
    assert v.idf()[v.term_to_index["a"]] == pytest.approx(math.log(3 / 2) + 1.0, abs=1e-15)


def test_tfidf_entries_by_hand():
    # doc "a a b" over vocabulary fitted on ["a b", "b c"]:
    # tf a=2, b=1; idf a=ln(3/2)+1, b=1
    v = fit_vocabulary(docs("a b", "b c"), TFIDF)
    raw = np.array([2 * (math.log(1.5) + 1), 1.0, 0.0])
    row = transform_tfidf(tokenize("a a b"), v, TFIDF).toarray()[0]
    np.testing.assert_allclose(row, raw / np.linalg.norm(raw), rtol=1e-12)
    sub = FeatureConfig("tfidf", sublinear_tf=True)
    raw = np.array([(1 + math.log(2)) * (math.log(1.5) + 1), 1.0, 0.0])
    row = transform_tfidf(tokenize("a a b"), v, sub).toarray()[0]
    np.testing.assert_allclose(row, raw / np.linalg.norm(raw), rtol=1e-12)


def test_idf_non_increasing_in_df():
    v = fit_vocabulary(docs("a b c d", "a b c", "a b", "a"), TFIDF)
    order = np.argsort(v.document_frequency, kind="stable")
    idf = v.idf()[order]
    assert np.all(np.diff(idf) <= 0)


def test_metric_column_order():
    # L=5, TTR=0.8, LD=0.4 distinct; FKGL computed independently
    doc = tokenize("The cat and the dog.")
    state = fit_features([doc], FeatureConfig("metrics", metric_scaling="none"))
    x = transform_metrics(doc, state)
    fkgl = 0.39 * 5 + 11.8 * 1 - 15.59
    np.testing.assert_allclose(x, [5.0, fkgl, 0.8, 0.4], rtol=1e-12)


def test_zscore_identical_docs_give_zero():
    d = docs("Define a stack.", "Define a stack.", "Define a stack.")
    state = fit_features(d, FeatureConfig("metrics"))
    assert state.metric_std == (1.0, 1.0, 1.0, 1.0)
    np.testing.assert_array_equal(transform(state, d).toarray(), np.zeros((3, 4)))


def test_zscore_uses_train_statistics():
    train = docs("Define a stack.", "Explain how the hash table resolves the collisions.")
    state = fit_features(train, FeatureConfig("metrics"))
    raw = np.array([compute_metrics(d).as_tuple() for d in train])
    z = transform(state, train).toarray()
    np.testing.assert_allclose(z, (raw - raw.mean(0)) / raw.std(0), atol=1e-12)


def test_shapes_per_mode():
    d = docs("a b c", "c d", "e")
    for mode, cols in (("metrics", 4), ("tfidf", 5), ("both", 9), ("counts", 5)):
        state = fit_features(d, FeatureConfig(mode))
        x = transform(state, d)
        assert x.shape == (3, cols) == (3, state.n_features)
        assert np.all(np.isfinite(x.toarray()))


def test_counts_mode_is_raw_counts():
    d = docs("red red blue", "blue blue green")
    state = fit_features(d, FeatureConfig("counts"))
    assert state.vocabulary.terms == ("blue", "green", "red")
    np.testing.assert_array_equal(transform(state, d).toarray(), [[1, 0, 2], [2, 1, 0]])


def test_config_validation():
    with pytest.raises(ValueError):
        FeatureConfig("bigrams")
    with pytest.raises(ValueError):
        FeatureConfig("tfidf", min_df=0)


vocab_words = st.sampled_from(["alpha", "beta", "gamma", "delta", "eps", "zeta", "eta"])
doc_lists = st.lists(st.lists(vocab_words, min_size=1, max_size=8), min_size=1, max_size=10)


@settings(max_examples=80, deadline=None)
@given(doc_lists, doc_lists, st.booleans())
def test_tfidf_norms_and_refit_free_transform(train, test, sublinear):
    cfg = FeatureConfig("tfidf", sublinear_tf=sublinear)
    train_docs = [tokenize(" ".join(d)) for d in train]
    test_docs = [tokenize(" ".join(d)) for d in test]
    state = fit_features(train_docs, cfg)
    x = transform(state, test_docs).toarray()
    norms = np.linalg.norm(x, axis=1)
    assert np.all((np.abs(norms - 1) < 1e-9) | (norms == 0))
    np.testing.assert_array_equal(x, transform(state, test_docs).toarray())
    # row i comes from document i
    for i, d in enumerate(test_docs):
        np.testing.assert_array_equal(x[i], transform(state, [d]).toarray()[0])
