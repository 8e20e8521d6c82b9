import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from uzopinion.text_norm import (
    RawPost,
    load_rule_table,
    parse_rule_table,
    segment,
    transliterate,
    transliterate_report,
)

from expected import WORD_PAIRS

@pytest.mark.parametrize("cyr, lat", WORD_PAIRS)
def test_word_pairs(cyr, lat):
    assert transliterate(cyr) == lat


def test_latin_passthrough():
    assert transliterate("film") == "film"
    s = "Zoʻr kino! 😂 o'zbek g'alaba"
    assert transliterate(s) == s


def test_mixed_script_sentence():
    assert transliterate("Бу film зўр экан") == "Bu film zoʻr ekan"


def test_unmappable_cyrillic_passes_through_with_warning():
    out, warnings = transliterate_report("мәлім")
    assert out == "mәlіm"
    assert len(warnings) == 2
    assert "U+04D9" in warnings[0]


def test_no_cyrillic_left_for_uzbek_alphabet():
    alphabet = "абвгдеёжзийклмнопрстуфхцчшщъыьэюяўқғҳ"
    out, warnings = transliterate_report(alphabet + alphabet.upper())
    assert warnings == []
    assert not any("Ѐ" <= ch <= "ӿ" for ch in out)


def test_rule_table_rejects_unknown_flag():
    with pytest.raises(ValueError, match="unknown context flag"):
        parse_rule_table("0435\te\tsometimes=ye\n")


def test_bundled_table_has_both_cases():
    rules = load_rule_table().rules
    assert rules["ш"].replacement == "sh"
    assert rules["Ш"].replacement == "Sh"
    assert rules["е"].contextual == "ye"


mixed_text = st.text(
    alphabet=st.sampled_from(list("абвгдеёжзийклмнопрстуфхцчшщъыьэюяўқғҳАЕЁЎШЧ" "abcdefgoʻʼ' ,.!😂-") + ["ә", "і"]),
    max_size=40,
)


@settings(max_examples=1000, deadline=None)
@given(mixed_text)
def test_idempotent(text):
    once = transliterate(text)
    assert transliterate(once) == once


@settings(max_examples=200, deadline=None)
@given(st.text(max_size=30))
def test_deterministic(text):
    assert transliterate(text) == transliterate(text)


# --- segmentation ---------------------------------------------------------

def kinds(text):
    return [(s.kind, s.content) for s in segment(text).segments]


def test_segment_example():
    seg = segment("Zoʻr kino! 😂")
    assert kinds("Zoʻr kino! 😂") == [
        ("word", "Zoʻr"), ("word", "kino"), ("punctuation", "!"), ("emoji", "😂")
    ]
    # Z o ʻ r _ k i n o ! _ 😂
    assert seg.graphemes_total == 12
    assert seg.graphemes_no_space == 10


def test_single_emoji():
    seg = segment("❤")
    assert kinds("❤") == [("emoji", "❤")]
    assert seg.graphemes_total == 1


def test_specials_split_words():
    assert kinds("a-b (c)") == [
        ("word", "a"), ("special", "-"), ("word", "b"),
        ("special", "("), ("word", "c"), ("special", ")"),
    ]


def test_apostrophes_stay_in_words():
    assert segment("o'zbek togʻ boʻldi sheʼr").words == ["o'zbek", "togʻ", "boʻldi", "sheʼr"]
    # a quote that is not part of a word
    assert kinds("'kino'") == [("other", "'"), ("word", "kino"), ("other", "'")]


def test_digits():
    assert kinds("2024 5ta b2b") == [("digit_run", "2024"), ("word", "5ta"), ("word", "b2b")]


def test_bare_digit_is_not_emoji_but_keycap_is():
    assert kinds("1") == [("digit_run", "1")]
    assert kinds("#") == [("special", "#")]
    assert kinds("1️⃣") == [("emoji", "1️⃣")]


@pytest.mark.parametrize("emoji", [
    "👨‍👩‍👧",
    "👩‍👩‍👧‍👦",
    "👍🏽",
    "🧑🏿‍🤝‍🧑🏻",
    "🇺🇿",
    "❤️‍🔥",
])
def test_emoji_clusters_never_split(emoji):
    assert kinds(f"a{emoji}{emoji} b") == [
        ("word", "a"), ("emoji", emoji), ("emoji", emoji), ("word", "b")
    ]


emoji_parts = st.sampled_from(["👨", "👩", "👧", "👍", "🧑", "❤", "🔥"])
modifiers = st.sampled_from(["", "🏻", "🏽", "🏿", "️"])


@st.composite
def zwj_sequences(draw):
    n = draw(st.integers(1, 4))
    return "‍".join(draw(emoji_parts) + draw(modifiers) for _ in range(n))


@settings(max_examples=300, deadline=None)
@given(st.lists(st.one_of(zwj_sequences(), st.sampled_from(["kino", " ", "!", "zoʻr", "-", "12"])), max_size=12))
def test_segment_partition(parts):
    text = "".join(parts)
    seg = segment(text)
    n_clusters = sum(len(segment_clusters(s.content)) for s in seg.segments)
    assert n_clusters + seg.whitespace_clusters == seg.graphemes_total
    assert seg.reconstruct() == text
    for s in seg.segments:
        if s.kind == "emoji":
            assert len(segment_clusters(s.content)) == 1


def segment_clusters(s):
    import grapheme
    return list(grapheme.graphemes(s))


def test_word_count_matches_tags(posts):
    for post in posts:
        assert len(segment(transliterate(post.text)).words) == len(post.pos_tags), post.id


def test_raw_post_validation():
    with pytest.raises(ValueError):
        RawPost("x", "", "latin", (), "positive")
    with pytest.raises(ValueError):
        RawPost("x", "kino", "latin", (), "neutral")
    with pytest.raises(ValueError):
        RawPost("x", "kino", "latin", (("kino", "gerund"),), "positive")
