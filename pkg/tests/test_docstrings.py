"""Tests that the public API is documented."""

import importlib
import inspect

import pytest

MODULES = [
    "induced_forest.main",
    "induced_forest.core.errors",
    "induced_forest.core.fixtures",
    "induced_forest.core.graph",
    "induced_forest.core.settings",
    "induced_forest.process.forest",
    "induced_forest.process.labels",
    "induced_forest.process.simulation",
    "induced_forest.analysis.bounds",
    "induced_forest.analysis.convergence",
    "induced_forest.analysis.ode_system",
    "induced_forest.analysis.recurrence",
    "induced_forest.analysis.state",
    "induced_forest.oracle.checks",
    "induced_forest.oracle.enumeration",
]


def undocumented(module_name: str) -> list[str]:
    module = importlib.import_module(module_name)
    missing = []
    for name, obj in vars(module).items():
        if name.startswith("_") or getattr(obj, "__module__", None) != module_name:
            continue
        if inspect.isfunction(obj) and not obj.__doc__:
            missing.append(name)
        elif inspect.isclass(obj):
            if not obj.__doc__:
                missing.append(name)
            for member, value in vars(obj).items():
                if member.startswith("_"):
                    continue
                if isinstance(value, property):
                    value = value.fget
                elif isinstance(value, (classmethod, staticmethod)):
                    value = value.__func__
                if inspect.isfunction(value) and not value.__doc__:
                    missing.append(f"{name}.{member}")
    return missing


class TestDocstrings:
    """Every public function, class, method and property carries a docstring."""

    @pytest.mark.parametrize("module_name", MODULES)
    def test_public_members(self, module_name):
        """Test the module's own public members are documented."""
        assert undocumented(module_name) == []
