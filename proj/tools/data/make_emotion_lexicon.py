"""Writes data/emotion_lexicon.tsv from the word lists below (one emotion per token)."""
import pathlib

WORDS = {
    "Happy": """happy happily happiness joy joyful joyous glad delighted delight delightful delicious
        yummy tasty love loved lovely loving enjoy enjoyed enjoying enjoyable pleasure pleased pleasant
        satisfied satisfying satisfaction great excellent amazing awesome wonderful fantastic fabulous
        perfect best favorite favourite fun cheerful smile smiling smiles laugh laughed laughing
        grateful thankful thanks thank blessed content comfort comfortable cozy friendly welcoming
        kind nice sweet fresh yum recommend recommended superb terrific brilliant celebrate
        celebration excited exciting thrilled fond adore adored beautiful heavenly""",
    "Angry": """angry anger mad furious fury rage raging outraged outrage annoyed annoying annoyance
        irritated irritating frustrated frustrating frustration hate hated hateful hostile rude
        rudely disrespectful insulting insult offended offensive livid infuriating infuriated
        resent resentful bitter disgusted disgusting disgust ridiculous unacceptable ripoff
        scam cheated cheat liar lied yelled yelling shouted shouting argue argued aggressive
        arrogant obnoxious horrible terrible worst awful pathetic useless""",
    "Sad": """sad sadly sadness unhappy sorrow sorry regret regretted disappointed disappointing
        disappointment depressed depressing depression miserable misery lonely alone cry cried
        crying tears heartbroken heartbreaking grief grieve mourn upset gloomy hopeless
        unfortunate unfortunately lost loss miss missed missing poor stale bland cold soggy
        empty dull closed gone declined decline letdown shame""",
    "Surprise": """surprise surprised surprising surprisingly unexpected unexpectedly astonished
        astonishing amazed stunned shocked shocking wow whoa unbelievable incredible incredibly
        sudden suddenly wonder wondered curious strange weird odd unusual remarkable
        speechless omg startled unreal mindblowing jawdropping""",
    "Fear": """fear afraid scared scary frightened frightening terrified terrifying horror
        horrified panic panicked anxious anxiety worried worry worrying nervous dread dreadful
        danger dangerous unsafe risk risky threat threatening alarming alarmed concerned concern
        sick sickness poisoning poisoned ill illness nausea vomit vomiting contaminated
        hygiene dirty filthy unsanitary cockroach cockroaches rats mold moldy bug bugs raw
        undercooked allergic allergy suspicious careful beware warning""",
}

def main():
    root = pathlib.Path(__file__).resolve().parents[2]
    seen = {}
    for emotion, block in WORDS.items():
        for w in block.split():
            if w in seen and seen[w] != emotion:
                raise SystemExit(f"{w} listed under {seen[w]} and {emotion}")
            seen[w] = emotion
    lines = [
        "# Emotion lexicon: token<TAB>emotion (Happy, Angry, Sad, Surprise, Fear).",
        "# Generated by tools/data/make_emotion_lexicon.py.",
    ]
    lines += [f"{w}\t{e}" for w, e in sorted(seen.items())]
    (root / "data" / "emotion_lexicon.tsv").write_text("\n".join(lines) + "\n")
    print(len(seen), "entries")

if __name__ == "__main__":
    main()
