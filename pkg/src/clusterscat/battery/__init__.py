"""Golden seed documents shipped with the package."""

import json
from importlib import resources

NAMES = ("A2", "B2", "G2", "Kronecker", "Markov", "A3")


def load(name):
    """The seed document (a dict) of a battery instance."""
    return json.loads(resources.files(__name__).joinpath(name + ".json").read_text())


def fixed_data(name):
    from ..cli_io import fixed_data_from_doc
    return fixed_data_from_doc(load(name))
