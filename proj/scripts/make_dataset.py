#!/usr/bin/env python3
"""Regenerates data/german_credit.csv, the loan-application dataset bundled with potlab.

The file is a synthetic stand-in that follows the schema of the public
"German credit risk" dataset (the simplified 9-attribute rendition):

    age,sex,job,housing,saving_account,checking_account,credit_amount,duration,purpose,label

1000 rows, exactly 700 labeled `repaid` and 300 labeled `default`. Feature
marginals and the label model were tuned so that the potlab pipeline
(quantile binning, one-hot encoding, RBF-SVM with cross-validated
hyperparameters) lands in the ranges documented in README.md.

The script is deterministic: running it always reproduces the bundled file
byte for byte. Requires numpy.
"""
import os
import numpy as np

SEED = 12
N = 1000
N_DEFAULT = 300

PURPOSES = ["car", "radio_tv", "furniture_equipment", "business", "education",
            "repairs", "domestic_appliances", "vacation_others"]
SAVING = ["little", "moderate", "quite_rich", "rich", "unknown"]
CHECKING = ["little", "moderate", "rich", "unknown"]
HOUSING = ["own", "rent", "free"]
JOB = ["unskilled_nonresident", "unskilled_resident", "skilled", "highly_skilled"]
SEX = ["male", "female"]

P_SEX = [0.69, 0.31]
P_JOB = [0.05, 0.17, 0.63, 0.15]
P_HOUSE = [0.70, 0.19, 0.11]
P_CHECK = [0.24, 0.38, 0.08, 0.30]
P_SAVE = [0.42, 0.27, 0.07, 0.06, 0.18]
P_PURPOSE = [0.30, 0.24, 0.16, 0.09, 0.06, 0.05, 0.05, 0.05]
CORR_ACCOUNTS = 0.10  # P(saving forced to little | checking little)

DUR_CHOICES = [6, 9, 12, 15, 18, 21, 24, 30, 36, 42, 48, 60, 72]
DUR_P = [0.06, 0.05, 0.18, 0.06, 0.10, 0.04, 0.19, 0.05, 0.13, 0.03, 0.06, 0.03, 0.02]

# Risk weights for the ground-truth default probability.
W_CHECK = {"little": 1.6, "moderate": 0.30, "rich": -0.50, "unknown": -0.90}
W_SAVE = {"little": 0.60, "moderate": 0.0, "quite_rich": -0.40, "rich": -0.60, "unknown": -0.20}
W_HOUSE = {"own": 0.0, "rent": 0.10, "free": 0.15}
W_JOB = {"unskilled_nonresident": 0.10, "unskilled_resident": 0.05, "skilled": 0.0, "highly_skilled": 0.05}
W_PURPOSE = {"car": 0.05, "radio_tv": -0.35, "furniture_equipment": -0.10, "business": 0.40,
             "education": 0.55, "repairs": 0.30, "domestic_appliances": 0.0, "vacation_others": 0.45}
W_AMOUNT_BIN = [-0.45, -0.20, 0.0, 0.45, 1.10]
W_DURATION_BIN = [-0.60, -0.25, 0.0, 0.45, 1.15]
W_AGE_BIN = [0.35, 0.10, 0.0, -0.05, -0.10]

# Squashing constants (solved offline for: mean default prob 0.30,
# 40% of rows above 0.5, probabilities clipped to [0.02, 0.70]).
LOGIT_SCALE = 11.93749782133075
LOGIT_SHIFT = -10.585938145169868
P_FLOOR, P_CAP = 0.02, 0.70


def sigmoid(z):
    return 1.0 / (1.0 + np.exp(-z))


def pop_bins(vals):
    """Population quintile bin index, same convention as the potlab encoder."""
    e = np.quantile(np.asarray(vals, dtype=float), [0.2, 0.4, 0.6, 0.8], method="linear")
    return np.array([(e < x).sum() for x in vals])


def main():
    rng = np.random.RandomState(SEED)
    rows = []
    for _ in range(N):
        age = int(np.clip(rng.lognormal(np.log(33), 0.30), 19, 75))
        sex = SEX[rng.choice(2, p=P_SEX)]
        job = JOB[rng.choice(4, p=P_JOB)]
        housing = HOUSING[rng.choice(3, p=P_HOUSE)]
        checking = CHECKING[rng.choice(4, p=P_CHECK)]
        if checking == "little" and rng.rand() < CORR_ACCOUNTS:
            saving = "little"
        else:
            saving = SAVING[rng.choice(5, p=P_SAVE)]
        purpose = PURPOSES[rng.choice(8, p=P_PURPOSE)]
        dur = rng.choice(DUR_CHOICES, p=DUR_P)
        z = rng.randn()
        amount = int(np.clip(np.exp(7.55 + 0.022 * dur + 0.55 * z), 250, 18500))
        if purpose in ("business", "car"):
            amount = int(min(18500, amount * 1.25))
        rows.append([age, sex, job, housing, saving, checking, amount, int(dur), purpose])

    amount_bin = pop_bins([r[6] for r in rows])
    duration_bin = pop_bins([r[7] for r in rows])
    age_bin = pop_bins([r[0] for r in rows])
    raw = np.array([
        W_CHECK[r[5]] + W_SAVE[r[4]] + W_HOUSE[r[3]] + W_JOB[r[2]] + W_PURPOSE[r[8]]
        + W_AMOUNT_BIN[amount_bin[i]] + W_DURATION_BIN[duration_bin[i]] + W_AGE_BIN[age_bin[i]]
        for i, r in enumerate(rows)
    ])
    q = np.clip(sigmoid(LOGIT_SCALE * raw + LOGIT_SHIFT), P_FLOOR, P_CAP)

    lab_rng = np.random.RandomState(SEED + 777)
    y = (lab_rng.rand(N) < q).astype(int)
    need = int(y.sum()) - N_DEFAULT
    while need != 0:  # trim to exactly N_DEFAULT by flipping random rows
        idx = lab_rng.randint(N)
        if need > 0 and y[idx] == 1:
            y[idx] = 0
            need -= 1
        elif need < 0 and y[idx] == 0:
            y[idx] = 1
            need += 1

    out = os.path.join(os.path.dirname(os.path.abspath(__file__)), "..", "data", "german_credit.csv")
    out = os.path.normpath(out)
    os.makedirs(os.path.dirname(out), exist_ok=True)
    with open(out, "w", newline="\n") as f:
        f.write("age,sex,job,housing,saving_account,checking_account,credit_amount,duration,purpose,label\n")
        for i, r in enumerate(rows):
            label = "default" if y[i] == 1 else "repaid"
            f.write(f"{r[0]},{r[1]},{r[2]},{r[3]},{r[4]},{r[5]},{r[6]},{r[7]},{r[8]},{label}\n")
    print(f"wrote {out}: {N} rows, {int(y.sum())} default / {N - int(y.sum())} repaid")


if __name__ == "__main__":
    main()
