"""The rewiring rules on a hand-written ledger.

A ledger holds one set curvature per stage.  Here stage 3 reports 0.4 after
the running maximum reached 0.5 at stage 2, so the trigger fires, the stage-2
element is dropped and the later entries are re-estimated.
"""

from fractions import Fraction

from resque import CurvatureLedger, expansion_curvature, ledger_update_after_removal, step_back, trigger_law

# sources: stage t was produced by adding element "s_t"
ledger = CurvatureLedger.from_values([0, 0.2, 0.5], [None, "s1", "s2"])
print("running max so far:", expansion_curvature(ledger))

current = 0.4
print("trigger fires for", current, "->", trigger_law(ledger, current))
print("trigger fires for 0.5 ->", trigger_law(ledger, 0.5))

# the current curvature joins the ledger before the step-back decision
ledger.append(current, "s3")
element, stage = step_back(ledger, ["s1", "s2", "s3"])
print("drop", element, "recorded at stage", stage)

updated = ledger_update_after_removal(ledger, stage)
print("after removal (floats):   ", updated.values())

# with exact rationals the midpoint comes out as 3/10 exactly
exact = CurvatureLedger.from_values([Fraction(0), Fraction(1, 5), Fraction(1, 2), Fraction(2, 5)],
                                    [None, "s1", "s2", "s3"])
print("after removal (fractions):", [str(v) for v in ledger_update_after_removal(exact, 2).values()])

# a longer ledger: every survivor is averaged with its old predecessor
longer = CurvatureLedger.from_values([0, 0.1, 0.5, 0.3, 0.4], [None, 1, 2, 3, 4])
print("longer ledger, drop stage 2:", ledger_update_after_removal(longer, 2).values())
