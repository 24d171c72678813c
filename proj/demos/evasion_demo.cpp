// Train the loan classifier once and walk one denied application through
// the evasion search at increasing budgets.
#include <cstdio>

#include "potlab/credit/dataset.hpp"
#include "potlab/pots/evasion.hpp"
#include "potlab/svm/smo.hpp"

using namespace potlab;

int main(int argc, char** argv) {
    const std::string path = argc > 1 ? argv[1] : "data/german_credit.csv";
    const auto records = credit::load_dataset(path);
    const auto split = credit::split_dataset(records, 1);
    const auto encoder = credit::Encoder::fit(split.train);
    svm::TrainConfig cfg;
    cfg.C = 10.0;
    cfg.gamma_rbf = 1.0 / encoder.dimension();
    const auto model = svm::train_smo(svm::encode_dataset(encoder, split.train), cfg);

    for (const auto& r : split.test) {
        const auto p = model.predict(encoder.encode(r));
        if (p.label != svm::Decision::deny) continue;
        std::printf("denied application: amount %.0f, duration %d, purpose %s (margin %.3f)\n",
                    r.credit_amount, r.duration, r.purpose.c_str(), p.margin);
        for (const int budget : {1, 2, 3}) {
            const auto res = pots::evade(model, encoder, r, budget);
            if (!res.accepted) {
                std::printf("  budget %d: no accepting transformation\n", budget);
                continue;
            }
            std::printf("  budget %d: accepted with amount %.0f, duration %d, purpose %s "
                        "(%d features changed)\n",
                        budget, res.chosen.credit_amount, res.chosen.duration,
                        res.chosen.purpose.c_str(), res.features_changed);
        }
        break;
    }
    return 0;
}
