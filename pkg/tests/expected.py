"""Hand-prepared expectations shared by several test modules."""

# Hand-converted with the 1995 alphabet.
WORD_PAIRS = [
    ("кино", "kino"),
    ("Ўзбек", "Oʻzbek"),
    ("ЎЗБЕК", "OʻZBEK"),
    ("шаҳар", "shahar"),
    ("Шаҳар", "Shahar"),
    ("ШАҲАР", "SHAHAR"),
    ("чиройли", "chiroyli"),
    ("ғалаба", "gʻalaba"),
    ("қизиқ", "qiziq"),
    ("яхши", "yaxshi"),
    ("юлдуз", "yulduz"),
    ("ёмон", "yomon"),
    ("цирк", "tsirk"),
    ("шеър", "sheʼr"),
    ("ер", "yer"),
    ("Ер", "Yer"),
    ("поезд", "poyezd"),
    ("келди", "keldi"),
    ("эртак", "ertak"),
    ("жуда", "juda"),
    ("ўйин", "oʻyin"),
    ("премьера", "premyera"),
    ("фильм", "film"),
    ("хурсанд", "xursand"),
    ("Тошкент", "Toshkent"),
]

# Latin forms written out by hand so the oracle never calls the transliterator.
HAND_LATIN = {
    "p02": "Juda yaxshi film ❤️❤️",
    "p06": "Aktyorlar YOMON oʻynashgan 😡 (bir marta koʻrsa boʻladi)",
    "p07": "Bu film zoʻr ekan 🔥🔥🔥 #uzbekkino",
    "p11": "Yulduzlar: Shahzoda va Yoqub 👏",
}

# Scores per exact occurrence, read off the fixture lexicon by hand.
SCORES = {
    "😂": 0.3, "❤": 1.0, "❤️": 1.0, "💩": -1.0, "😭": -0.2,
    "👨‍👩‍👧": 2 / 3, "👍🏽": 0.5, "👍🏻": 0.5, "😡": -0.8,
    "🔥": 2 / 7, "😐": 0.0,
}
