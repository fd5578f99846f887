"""
The property suite
==================

Every clause of the characterization is an executable check with a
tolerance.  This runs a reduced corpus; the CLI ``report`` command and the
acceptance tests run the full sizes.
"""
from maslovqm.qm import run_suite

report = run_suite(n=1, seed=0)
for check in report.to_dict()["checks"]:
    flag = "pass" if check["pass"] else "FAIL"
    print(f"{flag}  {check['name']:<26} {check['max_violation']:.2e} <= {check['tolerance']:.2e}")
print("all passed:", report.passed)
