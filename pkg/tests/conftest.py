import pytest

from bitextverify.ppm import PpmModel


def char_model(text: str, order: int, alphabet_size: int | None = None):
    """Train a character-alphabet model: chars map to ids in code-point order."""
    mapping = {ch: i for i, ch in enumerate(sorted(set(text)))}
    model = PpmModel(order, alphabet_size or max(2, len(mapping)))
    model.train([mapping[ch] for ch in text])
    return model, mapping


@pytest.fixture(scope="session")
def bundled_models():
    """Snapshots of the default desk-corpus models, trained once per session."""
    from importlib import resources

    from bitextverify.preprocess import ARABIC_NUMERIC, IDENTITY, apply_transform

    models = {}
    for lang, transform in (("arabic", ARABIC_NUMERIC), ("english", IDENTITY)):
        text = resources.files("bitextverify").joinpath(f"data/{lang}.txt").read_text("utf-8")
        model = PpmModel()
        for line in text.splitlines():
            model.train(apply_transform(line, transform))
        models[lang] = model.snapshot()
    return models["arabic"], models["english"]
