import pytest


def pytest_configure(config):
    config.addinivalue_line("markers", "run_last: run after every other test in the session")


def pytest_collection_modifyitems(session, config, items):
    # certificate accounting must see every reduction the suite performed
    items.sort(key=lambda item: item.get_closest_marker("run_last") is not None)
