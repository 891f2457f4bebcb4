#ifndef PLMORSE_H
#define PLMORSE_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PlmStatus {
  PLM_STATUS_OK = 0,
  PLM_STATUS_NULL_POINTER = 1,
  PLM_STATUS_INVALID_UTF8 = 2,
  PLM_STATUS_PARSE = 3,
  /**
   * Manifold, dimension or membership precondition failed.
   */
  PLM_STATUS_PRECONDITION = 4,
  /**
   * The gradient field is not a valid acyclic matching on the complex.
   */
  PLM_STATUS_INVALID_FIELD = 5,
  PLM_STATUS_INVALID_ARGUMENT = 6,
  PLM_STATUS_PANIC = 7,
} PlmStatus;

typedef enum PlmDefinition {
  /**
   * Middle-triangle index count (surfaces only).
   */
  PLM_DEFINITION_INDEX = 0,
  /**
   * Wedge count (surfaces only).
   */
  PLM_DEFINITION_WEDGE = 1,
  /**
   * Relative homology of the closed lower star modulo the lower link.
   */
  PLM_DEFINITION_HOMOLOGY = 2,
  /**
   * Reduced homology of the lower link.
   */
  PLM_DEFINITION_LINK = 3,
} PlmDefinition;

typedef enum PlmCoefficients {
  PLM_COEFFICIENTS_GF2 = 0,
  PLM_COEFFICIENTS_RATIONAL = 1,
} PlmCoefficients;

typedef enum PlmKind {
  PLM_KIND_REGULAR = 0,
  PLM_KIND_MINIMUM = 1,
  PLM_KIND_MAXIMUM = 2,
  PLM_KIND_SADDLE = 3,
} PlmKind;

/**
 * Opaque complex with vertex values.
 */
typedef struct PlmComplex PlmComplex;

/**
 * Opaque gradient field.
 */
typedef struct PlmField PlmField;

/**
 * Classification of one vertex.
 */
typedef struct PlmVertexClass {
  enum PlmKind kind;
  /**
   * Index of the critical point, or -1 when regular or several indices occur.
   */
  int32_t index;
  uint32_t total_multiplicity;
  /**
   * Multiplicities for indices 0..=3; entries above the dimension are 0.
   */
  uint32_t multiplicities[4];
} PlmVertexClass;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *plm_last_error(void);

/**
 * Parses a JSON document (`maximal_simplices`, `values`) into a complex.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PlmStatus plm_complex_from_json(const char *json, struct PlmComplex **out);

/**
 * # Safety
 * `complex` must come from `plm_complex_from_json` and not be used afterwards.
 */
void plm_complex_free(struct PlmComplex *complex);

/**
 * Dimension of the complex (-1 when empty or NULL).
 *
 * # Safety
 * `complex` must be NULL or a live handle.
 */
int32_t plm_complex_dimension(const struct PlmComplex *complex);

/**
 * Number of simplices of dimension `dim`.
 *
 * # Safety
 * `complex` must be NULL or a live handle.
 */
size_t plm_complex_count(const struct PlmComplex *complex, size_t dim);

/**
 * Classifies `vertex` under one definition.
 *
 * # Safety
 * `complex` must be a live handle and `out` a valid pointer.
 */
enum PlmStatus plm_classify_vertex(const struct PlmComplex *complex,
                                   uint32_t vertex,
                                   enum PlmDefinition definition,
                                   enum PlmCoefficients coeffs,
                                   struct PlmVertexClass *out);

/**
 * Builds a relatively perfect gradient field (the complex must be a
 * combinatorial manifold of dimension 1 to 3).
 *
 * # Safety
 * `complex` must be a live handle and `out` a valid pointer.
 */
enum PlmStatus plm_build_rp(const struct PlmComplex *complex, struct PlmField **out);

/**
 * Parses a field file: a JSON list of `[tail, head]` pairs.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PlmStatus plm_field_from_json(const char *json, struct PlmField **out);

/**
 * # Safety
 * `field` must come from this library and not be used afterwards.
 */
void plm_field_free(struct PlmField *field);

/**
 * # Safety
 * `field` must be NULL or a live handle.
 */
size_t plm_field_pair_count(const struct PlmField *field);

/**
 * The field as JSON; release with `plm_string_free`. NULL on a NULL handle.
 *
 * # Safety
 * `field` must be NULL or a live handle.
 */
char *plm_field_to_json(const struct PlmField *field);

/**
 * Writes `m_0, m_1, ...` into `counts` (at most `len` entries) and the number
 * of dimensions into `written`.
 *
 * # Safety
 * Handles must be live; `counts` must hold `len` entries; `written` valid.
 */
enum PlmStatus plm_morse_counts(const struct PlmComplex *complex,
                                const struct PlmField *field,
                                size_t *counts,
                                size_t len,
                                size_t *written);

/**
 * Checks validity, acyclicity and relative perfectness. `is_rp` receives the
 * verdict; an invalid or cyclic field yields `PLM_STATUS_INVALID_FIELD`.
 *
 * # Safety
 * Handles must be live and `is_rp` valid.
 */
enum PlmStatus plm_check_rp(const struct PlmComplex *complex,
                            const struct PlmField *field,
                            enum PlmCoefficients coeffs,
                            bool *is_rp);

/**
 * Full JSON analysis report; `field` may be NULL to build one. Release the
 * result with `plm_string_free`.
 *
 * # Safety
 * `complex` must be live, `field` NULL or live, `out` valid.
 */
enum PlmStatus plm_report_json(const struct PlmComplex *complex,
                               const struct PlmField *field,
                               enum PlmCoefficients coeffs,
                               char **out);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library.
 */
void plm_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PLMORSE_H */
