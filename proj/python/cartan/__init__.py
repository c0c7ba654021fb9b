"""Python front end for the cartan library.

Instances and reports are plain dicts in the JSON formats the CLI uses.
Every command returns ``(report, exit_code)`` with exit codes 0 pass,
1 verdict failure, 2 input error, 3 budget exceeded.
"""

import json as _json

from . import _cartan

__version__ = _cartan.__version__
REPORT_SCHEMA = _cartan.REPORT_SCHEMA


def commands():
    return list(_cartan.commands())


def run(command, instance, seed=1, cap=4096, tol=1e-9):
    text = instance if isinstance(instance, str) else _json.dumps(instance)
    report, code = _cartan.run(command, text, seed, cap, tol)
    return _json.loads(report), code


def random_instance(kind, atoms=4, group="z2", max_block=2, strongly_normal=False, ergodic=False, seed=1):
    return _json.loads(_cartan.random_instance(kind, atoms, group, max_block, strongly_normal, ergodic, seed))


def _command(name):
    def call(instance, seed=1, cap=4096, tol=1e-9):
        return run(name, instance, seed, cap, tol)

    call.__name__ = name.replace("-", "_")
    call.__doc__ = f"Run `{name}` on an instance dict."
    return call


validate = _command("validate")
pseudogroup = _command("pseudogroup")
synthesize = _command("synthesize")
roundtrip_a = _command("roundtrip-a")
crossed_product = _command("crossed-product")
extract = _command("extract")
roundtrip_b = _command("roundtrip-b")
quotient_rel = _command("quotient-rel")
roundtrip_c = _command("roundtrip-c")
metric = _command("metric")
