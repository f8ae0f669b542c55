#ifndef SPTORSION_H
#define SPTORSION_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum SptStatus {
  SPT_STATUS_OK = 0,
  // Bad arguments or unsupported parameters.
  SPT_STATUS_USAGE = 2,
  // Mathematically invalid input.
  SPT_STATUS_DOMAIN = 3,
  // An exact post-check failed.
  SPT_STATUS_INTERNAL = 4,
  // A bounded search ran out of budget.
  SPT_STATUS_RESOURCE = 5,
  SPT_STATUS_NULL_POINTER = 6,
  SPT_STATUS_PANIC = 7,
} SptStatus;

// A (p−1)×(p−1) matrix over ℤ[1/n].
typedef struct SptMatrix SptMatrix;

// Unit groups and class data for one (p, n).
typedef struct SptUnitGroups SptUnitGroups;

typedef struct SptVerifyReport {
  bool symplectic;
  bool order_p;
  bool char_poly_is_cyclotomic;
} SptVerifyReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread, or NULL. Valid until the next call on this thread.
const char *spt_last_error(void);

// Library version as a static string.
const char *spt_version(void);

// # Safety
// `s` must be NULL or a string returned by this library and not yet freed.
void spt_string_free(char *s);

// Number of conjugacy classes of order-p elements. `class_number` 0 means built in.
//
// # Safety
// `out` must be a valid pointer.
enum SptStatus spt_count_classes(uint32_t p, int64_t n, uint64_t class_number, uint64_t *out);

// # Safety
// `out` must be a valid pointer; the handle written there is freed with [`spt_unit_groups_free`].
enum SptStatus spt_unit_groups_new(uint32_t p, int64_t n, struct SptUnitGroups **out);

// # Safety
// `ug` must be NULL or a handle from [`spt_unit_groups_new`] not yet freed.
void spt_unit_groups_free(struct SptUnitGroups *ug);

// Dimension of the GF(2) quotient that labels the classes.
//
// # Safety
// `ug` must be a live handle and `out` a valid pointer.
enum SptStatus spt_quotient_dim(const struct SptUnitGroups *ug, size_t *out);

// Both values of the norm index; they always agree for a correct computation.
//
// # Safety
// `ug` must be a live handle and the outputs valid pointers.
enum SptStatus spt_norm_index(const struct SptUnitGroups *ug,
                              uint64_t *formula,
                              uint64_t *constructive);

// Matrix of the class with bit string `bits`.
//
// # Safety
// `ug` must be a live handle, `bits` a nul-terminated string, `out` a valid pointer.
enum SptStatus spt_construct(const struct SptUnitGroups *ug,
                             const char *bits,
                             struct SptMatrix **out);

// Reads a matrix from its JSON file format.
//
// # Safety
// `json` must be a nul-terminated string and `out` a valid pointer.
enum SptStatus spt_matrix_from_json(const char *json, struct SptMatrix **out);

// # Safety
// `m` must be a live handle and `out` a valid pointer; free the string with [`spt_string_free`].
enum SptStatus spt_matrix_to_json(const struct SptMatrix *m, char **out);

// Entry (row, col) as "num/den".
//
// # Safety
// `m` must be a live handle and `out` a valid pointer; free the string with [`spt_string_free`].
enum SptStatus spt_matrix_entry(const struct SptMatrix *m, size_t row, size_t col, char **out);

// Side length of the matrix, or 0 for NULL.
//
// # Safety
// `m` must be NULL or a live handle.
size_t spt_matrix_dim(const struct SptMatrix *m);

// # Safety
// `m` must be NULL or a handle from this library not yet freed.
void spt_matrix_free(struct SptMatrix *m);

// # Safety
// `m` must be a live handle and `out` a valid pointer.
enum SptStatus spt_verify(const struct SptMatrix *m, struct SptVerifyReport *out);

// Class bit string of an order-p symplectic matrix.
//
// # Safety
// Handles must be live and `out` a valid pointer; free the string with [`spt_string_free`].
enum SptStatus spt_invariant(const struct SptUnitGroups *ug, const struct SptMatrix *m, char **out);

// Whether two order-p matrices are conjugate in Sp(p−1, ℤ[1/n]).
//
// # Safety
// Handles must be live and `out` a valid pointer.
enum SptStatus spt_conjugate(const struct SptUnitGroups *ug,
                             const struct SptMatrix *a,
                             const struct SptMatrix *b,
                             bool *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SPTORSION_H */
