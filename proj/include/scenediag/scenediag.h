#ifndef SCENEDIAG_SCENEDIAG_H
#define SCENEDIAG_SCENEDIAG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SCENEDIAG_BUILDING)
#    define SD_API __declspec(dllexport)
#  else
#    define SD_API __declspec(dllimport)
#  endif
#else
#  define SD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sd_status {
    SD_OK = 0,
    SD_ERR_VALIDATION = 1,
    SD_ERR_IO = 2,
    SD_ERR_CONFIG = 3,
    SD_ERR_NETWORK = 4,
    SD_ERR_INTERNAL = 5,
    SD_ERR_ARGUMENT = 6
} sd_status;

typedef struct sd_dataset sd_dataset;
typedef struct sd_scene sd_scene;
typedef struct sd_bank sd_bank;

typedef void (*sd_warning_fn)(const char* message, void* user);

SD_API const char* sd_version(void);

/* Message of the last failed call on this thread; empty after a success. */
SD_API const char* sd_last_error(void);

/* Process exit code for a status: 0 ok, 2 validation/config, 3 network, 4 io, 1 otherwise. */
SD_API int sd_exit_code(sd_status status);

/* Strings and buffers returned through out-parameters are owned by the caller. */
SD_API void sd_string_free(char* text);
SD_API void sd_buffer_free(uint8_t* data);

/* NULL restores the default sink (stderr). */
SD_API void sd_set_warning_callback(sd_warning_fn fn, void* user);

/* Dataset specs (YAML or JSON text). */
SD_API sd_status sd_dataset_parse(const char* text, sd_dataset** out);
SD_API sd_status sd_dataset_load(const char* path, sd_dataset** out);
SD_API void sd_dataset_free(sd_dataset* dataset);
SD_API sd_status sd_dataset_count(const sd_dataset* dataset, size_t* out);
SD_API sd_status sd_dataset_hash(const sd_dataset* dataset, char** out);
/* Manifest preview: every combination with its seed, assignments and filenames. */
SD_API sd_status sd_dataset_expand(const sd_dataset* dataset, char** out_json);
/* Concrete scene config of combination `index`, ready for sd_scene_resolve. */
SD_API sd_status sd_dataset_scene(const sd_dataset* dataset, size_t index, sd_scene** out);

/* Scenes. */
SD_API sd_status sd_scene_resolve(const char* config_json, uint64_t seed, sd_scene** out);
SD_API sd_status sd_scene_import(const char* scene_spec_json, sd_scene** out);
SD_API void sd_scene_free(sd_scene* scene);
/* JSON array of violation strings; "[]" when valid. */
SD_API sd_status sd_scene_validate(const sd_scene* scene, char** out_json);
SD_API sd_status sd_scene_export(const sd_scene* scene, char** out_json);
SD_API sd_status sd_scene_render_png(const sd_scene* scene, uint8_t** out_data, size_t* out_size);
SD_API sd_status sd_scene_write_png(const sd_scene* scene, const char* path);
SD_API sd_status sd_scene_legend_json(const sd_scene* scene, char** out_json);
SD_API sd_status sd_scene_legend_text(const sd_scene* scene, char** out_text);

/* Question banks. */
SD_API sd_status sd_bank_default(sd_bank** out);
SD_API sd_status sd_bank_load(const char* path, sd_bank** out);
SD_API void sd_bank_free(sd_bank* bank);
/* JSON array of keys for "chess" or "poker". */
SD_API sd_status sd_bank_keys(const sd_bank* bank, const char* game, char** out_json);

/* Rendered question for a legend: prompt, question, bindings, ground truth and vocabulary. */
SD_API sd_status sd_question_instantiate(const sd_bank* bank, const char* key, const char* legend_json,
                                         const char* preprompt, const char* instruction, char** out_json);
/* Ground truth of `key` for a legend; question_text may be NULL. */
SD_API sd_status sd_question_extract(const sd_bank* bank, const char* key, const char* legend_json,
                                     const char* question_text, char** out_json);

/* vocabulary_json is a JSON array of labels or NULL. */
SD_API sd_status sd_parse_answer(const char* text, const char* answer_kind, const char* instruction,
                                 const char* preprompt, const char* vocabulary_json, char** out_json);

/* Pipeline stages. options_json may be NULL.
   generate options: seed, max_new_scenes, bank (path).
   evaluate options: preprompts, instructions, keys, live, bank.
   diagnose options: by, cross ([[a, b], ...]), cross_metric, bands, band_path, correlate (path). */
SD_API sd_status sd_pipeline_generate(const char* spec_path, const char* out_dir, const char* options_json,
                                      char** out_json);
/* out_exit_code receives 0 or 3 (partial) when the run completes. */
SD_API sd_status sd_pipeline_evaluate(const char* dataset_dir, const char* endpoint_path, const char* options_json,
                                      char** out_json, int* out_exit_code);
SD_API sd_status sd_pipeline_diagnose(const char* dataset_dir, const char* options_json, char** out_json);

#ifdef __cplusplus
}
#endif

#endif
