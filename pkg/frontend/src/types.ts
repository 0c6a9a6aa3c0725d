// Wire types of the recommendation service (JSON, camelCase keys).

export interface FieldRef {
  fieldLabel: string;
  fieldType?: string | null;
}

export interface ContextPair {
  fieldLabel: string;
  fieldType?: string | null;
  valueLabel: string;
  valueType?: string | null;
}

export interface RecommendOptions {
  scoreCutoff?: number;
  maxResults?: number;
}

export interface RecommendRequest {
  targetField: FieldRef;
  context: ContextPair[];
  options?: RecommendOptions;
}

export interface Suggestion {
  valueLabel: string;
  valueType: string | null;
  score: number;
  rank: number;
}

export interface TemplateInfo {
  templateId: string;
  fields: FieldRef[];
}
