#include <stdio.h>
#include "selforg.h"

int main(void) {
    double low[2] = {0.0, 0.0};
    double high[2] = {1.0, 1.0};
    SelforgDataset *data = NULL;
    if (selforg_synth_uniform(low, high, 2, 200, 7, &data) != SELFORG_STATUS_OK) {
        fprintf(stderr, "synth: %s\n", selforg_last_error());
        return 1;
    }
    SelforgConfig *config = selforg_config_new(SELFORG_MODEL_KIND_SOM);
    if (selforg_config_set(config, "som.width", "4") != SELFORG_STATUS_OK ||
        selforg_config_set(config, "som.height", "4") != SELFORG_STATUS_OK ||
        selforg_config_set(config, "som.steps", "1000") != SELFORG_STATUS_OK) {
        fprintf(stderr, "config: %s\n", selforg_last_error());
        return 1;
    }
    if (selforg_config_set(config, "som.bogus", "1") != SELFORG_STATUS_INVALID_ARGUMENT) {
        return 1;
    }
    SelforgModel *model = NULL;
    if (selforg_train(config, data, &model) != SELFORG_STATUS_OK) {
        fprintf(stderr, "train: %s\n", selforg_last_error());
        return 1;
    }
    double qe = 0.0;
    selforg_model_quantization_error(model, data, &qe);
    printf("units=%zu qe=%.17g\n", selforg_model_n_units(model), qe);
    selforg_model_free(model);
    selforg_config_free(config);
    selforg_dataset_free(data);
    return 0;
}
