import importlib
import inspect
import pkgutil
import unittest

import satisfaction


def package_modules():
    for info in pkgutil.iter_modules(satisfaction.__path__):
        yield importlib.import_module(f"satisfaction.{info.name}")


def functions_of(module):
    """Functions written in `module`, including methods of its own classes."""
    for name, value in vars(module).items():
        if inspect.isfunction(value):
            yield name, value
        elif inspect.isclass(value) and value.__module__ == module.__name__:
            for attribute, member in vars(value).items():
                if isinstance(member, (classmethod, staticmethod)):
                    member = member.__func__
                elif isinstance(member, property):
                    member = member.fget
                if inspect.isfunction(member):
                    yield f"{name}.{attribute}", member


class TestAnnotations(unittest.TestCase):

    def test_functions_are_unannotated(self):
        annotated = []
        for module in package_modules():
            for name, function in functions_of(module):
                # Dataclass-generated methods come from "<string>".
                if function.__code__.co_filename != module.__file__:
                    continue
                if function.__annotations__:
                    annotated.append(f"{module.__name__}.{name}")
        self.assertEqual(annotated, [])


if __name__ == "__main__":
    unittest.main()
